"""Experiment sweeps: scenario presets, per-run metrics, aggregation, export."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .domain import PlanningDomain
from .errors import ConfigError, SynthesisError
from .game import ParityGame, product
from .kitchen import KitchenConfig, build_kitchen
from .gridworld import build_gridworld
from .runtime import ProbabilisticHuman, RunRecord, ScriptedHuman, simulate
from .tasklogic import TaskFormula, compile_monitor, eval_prop, parse_task
from .templates import SynthesisResult, synthesize


@dataclass(frozen=True)
class HumanModelSpec:
    kind: str  # "probabilistic" | "scripted"
    task: str = ""
    compliance: float = 0.9
    heed: float = 0.9
    actions: tuple[str, ...] = ()
    loop: bool = False

    def build(self):
        if self.kind == "probabilistic":
            return ProbabilisticHuman(self.task, self.compliance, self.heed)
        if self.kind == "scripted":
            return ScriptedHuman(self.actions, self.loop)
        raise ConfigError(f"unknown human model kind {self.kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    domain_spec: str
    robot_task: str
    human_model: HumanModelSpec
    alphas: tuple[float, ...]
    runs: int = 10
    max_moves: int = 500
    stop_deliveries: int | None = 10
    seed_base: int = 0
    scope: str = "cumulative"
    window: int = 20
    colive_budget: int = 3
    timeout_s: float = 120.0

    def __post_init__(self):
        if any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ConfigError("alpha values must lie in [0,1]")
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")


@dataclass(frozen=True)
class MetricsRow:
    scenario: str
    alpha: float
    run: int
    seed: int
    robot_pct: float
    human_pct: float
    joint_pct: float
    feedback_freq: float
    moves: int
    deliveries: int
    status: str
    robot_recent: bool  # recipe satisfied among the last 3 deliveries
    human_recent: bool
    joint_recent: bool

    def __post_init__(self):
        if self.joint_pct > min(self.robot_pct, self.human_pct) + 1e-9:
            raise ValueError("joint percentage cannot exceed either share")


# Recipe table used by the named scenarios: exact 3 onions, exact 2 onions,
# at-least-2 and at-most-2.
_SCENARIOS = {
    "identical": {
        "robot_task": "G F delivered_onions_3",
        "human_task": "G F delivered_onions_3",
        "compliance": 1.0,
        "heed": 1.0,
        "scope": "cumulative",
        "colive_budget": 0,
    },
    "incompatible": {
        "robot_task": "G F delivered_onions_3",
        "human_task": "G F delivered_onions_2",
        "compliance": 0.95,
        "heed": 0.5,
        "scope": "window",
        "colive_budget": 0,
    },
    "compatible": {
        "robot_task": "G F (delivered_onions_2 | delivered_onions_3)",
        "human_task": "G F (delivered_onions_1 | delivered_onions_2)",
        "compliance": 0.95,
        "heed": 0.97,
        "scope": "cumulative",
        "colive_budget": 0,
    },
}


def scenario_config(
    name: str,
    alphas=(0.0, 0.02, 0.04, 0.07, 0.1),
    runs: int = 10,
    seed_base: int = 0,
    max_moves: int = 500,
) -> ExperimentConfig:
    if name not in _SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {sorted(_SCENARIOS)}")
    preset = _SCENARIOS[name]
    return ExperimentConfig(
        scenario=name,
        domain_spec="kitchen",
        robot_task=preset["robot_task"],
        human_model=HumanModelSpec(
            kind="probabilistic",
            task=preset["human_task"],
            compliance=preset["compliance"],
            heed=preset["heed"],
        ),
        alphas=tuple(alphas),
        runs=runs,
        max_moves=max_moves,
        stop_deliveries=10,
        seed_base=seed_base,
        scope=preset["scope"],
        colive_budget=preset.get("colive_budget", 3),
    )


def scenario_names() -> list[str]:
    return sorted(_SCENARIOS)


def build_domain(spec: str) -> PlanningDomain:
    """Domain specs: ``gridworld[:rows=..;cols=..;cap=..]``, ``kitchen``, or
    ``file:<path>``."""
    kind, _, params_text = spec.partition(":")
    params = {}
    if kind != "file":
        for chunk in params_text.split(";"):
            if chunk:
                key, _, value = chunk.partition("=")
                params[key] = value
    if kind == "gridworld":
        return build_gridworld(
            rows=int(params.get("rows", 3)),
            cols=int(params.get("cols", 3)),
            max_objects_per_agent=int(params.get("cap", 3)),
        )
    if kind == "kitchen":
        return build_kitchen(KitchenConfig())
    if kind == "file":
        from .domain import parse_domain

        with open(params_text, encoding="utf-8") as handle:
            return parse_domain(handle.read())
    raise ConfigError(f"unknown domain spec {spec!r}")


def prepare(domain: PlanningDomain, task_text: str) -> tuple[ParityGame, SynthesisResult, TaskFormula]:
    task = parse_task(task_text, domain.propositions)
    game = product(domain, compile_monitor(task))
    synthesis = synthesize(game)
    if game.initial not in synthesis.winning:
        raise SynthesisError(
            "no cooperative solution from the initial state", synthesis.winning
        )
    return game, synthesis, task


def run_experiment(config: ExperimentConfig, keep_records: bool = False):
    """Execute the sweep; returns (rows, records) ordered by (alpha, run)."""
    domain = build_domain(config.domain_spec)
    game, synthesis, task = prepare(domain, config.robot_task)
    human_goal = _single_goal(parse_task(config.human_model.task, domain.propositions)) if (
        config.human_model.kind == "probabilistic"
    ) else None
    robot_goal = _single_goal(task)

    rows: list[MetricsRow] = []
    records: list[RunRecord] = []
    for alpha in config.alphas:
        for run in range(config.runs):
            seed = config.seed_base + run
            record = simulate(
                domain,
                task,
                config.human_model.build(),
                alpha=alpha,
                max_moves=config.max_moves,
                seed=seed,
                stop_condition=(
                    ("delivered", config.stop_deliveries)
                    if config.stop_deliveries
                    else None
                ),
                scope=config.scope,
                window=config.window,
                colive_budget=config.colive_budget,
                timeout_s=config.timeout_s,
                prepared=(game, synthesis),
            )
            rows.append(
                metrics_from_record(record, config.scenario, alpha, run, robot_goal, human_goal)
            )
            if keep_records:
                records.append(record)
    return rows, records


def _single_goal(task: TaskFormula):
    if len(task.recurrence) == 1:
        return task.recurrence[0]
    return None


def metrics_from_record(
    record: RunRecord, scenario: str, alpha: float, run: int, robot_goal, human_goal
) -> MetricsRow:
    deliveries = record.deliveries()
    satisfied_r = [d for d in deliveries if robot_goal and eval_prop(robot_goal, {d[1]})]
    satisfied_h = [d for d in deliveries if human_goal and eval_prop(human_goal, {d[1]})]
    both = [d for d in deliveries if d in satisfied_r and d in satisfied_h]
    total = max(1, len(deliveries))
    human_turns = max(1, sum(1 for m in record.moves if m.owner == "H"))
    recent = deliveries[-3:]

    def recent_hits(goal):
        return bool(goal) and any(eval_prop(goal, {d[1]}) for d in recent)

    return MetricsRow(
        scenario=scenario,
        alpha=alpha,
        run=run,
        seed=record.meta.get("seed", run),
        robot_pct=100.0 * len(satisfied_r) / total,
        human_pct=100.0 * len(satisfied_h) / total,
        joint_pct=100.0 * len(both) / total,
        feedback_freq=record.feedback_message_count() / human_turns,
        moves=len(record.moves),
        deliveries=len(deliveries),
        status=record.status,
        robot_recent=recent_hits(robot_goal),
        human_recent=recent_hits(human_goal),
        joint_recent=recent_hits(robot_goal) and recent_hits(human_goal),
    )


# --------------------------------------------------------------------------
# Export and aggregation
# --------------------------------------------------------------------------

_COLUMNS = (
    "scenario",
    "alpha",
    "run",
    "seed",
    "robot_pct",
    "human_pct",
    "joint_pct",
    "feedback_freq",
    "moves",
    "deliveries",
    "status",
    "robot_recent",
    "human_recent",
    "joint_recent",
)


def emit_metrics(rows: list[MetricsRow], fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [",".join(_COLUMNS)]
        for row in rows:
            lines.append(",".join(_cell(getattr(row, c)) for c in _COLUMNS))
        return "\n".join(lines) + "\n"
    if fmt in ("jsonl", "json-lines"):
        lines = [
            json.dumps({c: getattr(row, c) for c in _COLUMNS}, sort_keys=True)
            for row in rows
        ]
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown metrics format {fmt!r}")


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def parse_metrics(text: str, fmt: str = "csv") -> list[MetricsRow]:
    rows = []
    if fmt == "csv":
        lines = [l for l in text.splitlines() if l.strip()]
        header = lines[0].split(",")
        if tuple(header) != _COLUMNS:
            raise ConfigError("unexpected metrics header")
        for line in lines[1:]:
            rows.append(_row_from(dict(zip(_COLUMNS, line.split(",")))))
    else:
        for line in text.splitlines():
            if line.strip():
                rows.append(_row_from(json.loads(line)))
    return rows


def _row_from(values: dict) -> MetricsRow:
    def boolish(x):
        return x if isinstance(x, bool) else x == "true"

    return MetricsRow(
        scenario=values["scenario"],
        alpha=float(values["alpha"]),
        run=int(values["run"]),
        seed=int(values["seed"]),
        robot_pct=float(values["robot_pct"]),
        human_pct=float(values["human_pct"]),
        joint_pct=float(values["joint_pct"]),
        feedback_freq=float(values["feedback_freq"]),
        moves=int(values["moves"]),
        deliveries=int(values["deliveries"]),
        status=values["status"],
        robot_recent=boolish(values["robot_recent"]),
        human_recent=boolish(values["human_recent"]),
        joint_recent=boolish(values["joint_recent"]),
    )


def aggregate(rows: list[MetricsRow]) -> list[dict]:
    """Mean/stddev of the share columns plus runs-satisfying fractions,
    one entry per (scenario, alpha)."""
    cells: dict[tuple[str, float], list[MetricsRow]] = {}
    for row in rows:
        cells.setdefault((row.scenario, row.alpha), []).append(row)
    out = []
    for (scenario, alpha) in sorted(cells):
        group = cells[(scenario, alpha)]
        entry = {"scenario": scenario, "alpha": alpha, "runs": len(group)}
        for column in ("robot_pct", "human_pct", "joint_pct", "feedback_freq"):
            values = [getattr(r, column) for r in group]
            entry[f"mean_{column}"] = _mean(values)
            entry[f"std_{column}"] = _std(values)
        for column in ("robot_recent", "human_recent", "joint_recent"):
            entry[f"frac_{column}"] = _mean([1.0 if getattr(r, column) else 0.0 for r in group])
        out.append(entry)
    return out


def _mean(values):
    return sum(values) / len(values) if values else 0.0


def _std(values):
    if len(values) < 2:
        return 0.0
    mu = _mean(values)
    return math.sqrt(sum((v - mu) ** 2 for v in values) / (len(values) - 1))


def spearman(xs: list[float], ys: list[float]) -> float:
    """Rank correlation with tie-averaged ranks."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two equal-length samples")

    def ranks(values):
        order = sorted(range(len(values)), key=lambda i: values[i])
        out = [0.0] * len(values)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
                j += 1
            rank = (i + j) / 2 + 1
            for k in range(i, j + 1):
                out[order[k]] = rank
            i = j + 1
        return out

    rx, ry = ranks(xs), ranks(ys)
    mx, my = _mean(rx), _mean(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    vy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx * vy)
