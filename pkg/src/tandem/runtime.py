"""Online execution: randomized template-following robot, human observation,
violation-frequency tracking and threshold-gated feedback.

The robot draws uniformly from its template-enabled edges, so revisiting a
state lets it try different continuations (adaptation).  Human moves are
classified against the human template: a move at a vertex carrying live-group
or co-live constraints counts as an opportunity, and as a violation when it
ignores all of them.  Feedback about live/co-live constraints turns on while
the violation frequency exceeds the threshold alpha; unsafe edges are always
flagged regardless of alpha.
"""

from __future__ import annotations

import json
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .domain import Owner, PlanningDomain
from .game import ParityGame, product
from .tasklogic import TaskFormula, compile_monitor, parse_task
from .templates import Edge, SynthesisResult, enabled_robot_actions, synthesize

UNSAFE_WARNING = "unsafe_warning"
LIVE_SUGGESTION = "live_suggestion"
COLIVE_DISCOURAGE = "colive_discourage"
RECOVERY_IMPOSSIBLE = "recovery_impossible"


@dataclass(frozen=True)
class Suggestion:
    edge: Edge
    display: str


@dataclass(frozen=True)
class FeedbackMessage:
    kind: str
    suggested: tuple[Suggestion, ...]
    frequency: float
    opportunities: int
    violations: int

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "suggested": [
                {"edge": f"{e.edge[0]}->{e.edge[1]}", "display": e.display}
                for e in self.suggested
            ],
            "frequency": round(self.frequency, 6),
            "opportunities": self.opportunities,
            "violations": self.violations,
        }


@dataclass
class HumanStats:
    opportunities: int = 0
    violations: int = 0
    by_constraint: dict[str, int] = field(default_factory=dict)
    violated_groups: set[int] = field(default_factory=set)
    window: deque = field(default_factory=lambda: deque(maxlen=20))

    def record(self, opportunity: bool, violation: bool, kind: str | None):
        if opportunity:
            self.opportunities += 1
            self.window.append(violation)
        if violation:
            self.violations += 1
            if kind:
                self.by_constraint[kind] = self.by_constraint.get(kind, 0) + 1


@dataclass
class MoveRecord:
    index: int
    owner: str
    edge: Edge
    display: str
    opportunity: bool = False
    violation: bool = False
    feedback_active: bool = False
    frequency: float = 0.0
    events: tuple[str, ...] = ()
    message: dict | None = None

    def to_json(self) -> dict:
        entry = {
            "type": "move",
            "i": self.index,
            "owner": self.owner,
            "src": self.edge[0],
            "dst": self.edge[1],
            "display": self.display,
            "opp": self.opportunity,
            "vio": self.violation,
            "fb": self.feedback_active,
            "freq": round(self.frequency, 6),
            "events": list(self.events),
        }
        if self.message is not None:
            entry["msg"] = self.message
        return entry


class Session:
    """One live interaction: game, installed template pair, counters, RNG."""

    def __init__(
        self,
        game: ParityGame,
        synthesis: SynthesisResult,
        alpha: float,
        seed: int,
        scope: str = "cumulative",
        window: int = 20,
        colive_budget: int = 3,
        task: TaskFormula | None = None,
    ):
        if scope not in ("cumulative", "window"):
            raise ValueError(f"unknown frequency scope {scope!r}")
        self.game = game
        self.pair = synthesis.pair
        self.rank = synthesis.rank
        self.alpha = alpha
        self.seed = seed
        self.scope = scope
        self.colive_budget = colive_budget
        self.task = task
        self.rng = random.Random(seed)
        self.current = game.initial
        self.history: list[Edge] = []
        self.budgets: dict[Edge, int] = {}
        self.stats = HumanStats(window=deque(maxlen=window))
        self.status = "active"
        self.moves: list[MoveRecord] = []
        self.feedback_messages = 0
        self.resyntheses = 0
        self._index_templates()

    def _index_templates(self):
        self.groups_at: dict[int, list[int]] = {}
        for gi, group in enumerate(self.pair.human.livegroups):
            for (u, _) in group:
                self.groups_at.setdefault(u, []).append(gi)
        self.colive_at: dict[int, list[Edge]] = {}
        for (u, v) in self.pair.human.colive:
            self.colive_at.setdefault(u, []).append((u, v))
        self.unsafe_at: dict[int, list[Edge]] = {}
        for (u, v) in self.pair.human.unsafe:
            self.unsafe_at.setdefault(u, []).append((u, v))

    # -- derived quantities -------------------------------------------------

    def frequency(self) -> float:
        if self.scope == "window":
            window = self.stats.window
            return sum(window) / max(1, len(window))
        return self.stats.violations / max(1, self.stats.opportunities)

    def frequency_active(self) -> bool:
        return self.frequency() > self.alpha

    def legal_edges(self) -> list[Edge]:
        return [(self.current, t) for t in self.game.adjacency[self.current]]

    def goal_event_count(self) -> int:
        return sum(1 for m in self.moves if m.events)

    def delivery_count(self) -> int:
        return sum(
            1
            for m in self.moves
            if any(e.startswith("delivered_") for e in m.events)
        )

    def _advance(self, edge: Edge) -> tuple[str, ...]:
        self.history.append(edge)
        self.current = edge[1]
        label = self._label_of(edge[1])
        events: list[str] = sorted(e for e in label if e.startswith("delivered_"))
        if self.game.colors[edge[1]] == 2:
            events.append("goal")
            events += sorted(label & {"adj", "diag", "major"})
        return tuple(events)

    def _label_of(self, vertex: int) -> frozenset[str]:
        if self.game.domain is None:
            return frozenset()
        return self.game.domain.label(self.game.origin[vertex][0])


def robot_step(session: Session) -> Edge:
    """Draw the robot's move uniformly from the enabled set and apply it."""
    game = session.game
    if game.owners[session.current] is not Owner.ROBOT:
        raise ValueError("robot_step called on a non-robot vertex")
    if session.status == "task_lost":
        enabled = _best_effort_edges(session)
    else:
        enabled = enabled_robot_actions(game, session.pair, session.current, session.budgets)
        if not enabled:
            handle_unsafe_transition(session)
            if session.status == "task_lost":
                enabled = _best_effort_edges(session)
            else:
                enabled = enabled_robot_actions(
                    game, session.pair, session.current, session.budgets
                )
    if not enabled:
        raise RuntimeError(f"robot has no outgoing edge at vertex {session.current}")
    edge = enabled[session.rng.randrange(len(enabled))]
    if edge in session.pair.robot.colive:
        session.budgets[edge] = session.budgets.get(edge, session.colive_budget) - 1
    events = session._advance(edge)
    session.moves.append(
        MoveRecord(
            index=len(session.moves),
            owner="R",
            edge=edge,
            display=session.game.edge_display(edge),
            feedback_active=session.frequency_active(),
            frequency=session.frequency(),
            events=events,
        )
    )
    return edge


def _best_effort_edges(session: Session) -> list[Edge]:
    edges = [
        (session.current, t)
        for t in session.game.adjacency[session.current]
        if (session.current, t) not in session.pair.robot.unsafe
    ]
    return edges or session.legal_edges()


def observe_human(session: Session, edge: Edge, message: FeedbackMessage | None = None) -> MoveRecord:
    """Classify and apply a human move; updates counters, advances the state."""
    game = session.game
    if game.owners[session.current] is not Owner.HUMAN:
        raise ValueError("observe_human called on a non-human vertex")
    if edge[0] != session.current or edge[1] not in game.adjacency[session.current]:
        raise ValueError(f"edge {edge} does not leave the current vertex")

    group_ids = session.groups_at.get(session.current, [])
    colive_here = session.colive_at.get(session.current, [])
    opportunity = bool(group_ids or colive_here)
    violation = False
    kind = None
    if edge in session.pair.human.colive:
        violation, kind = True, "colive"
    elif group_ids:
        grouped_edges = set()
        for gi in group_ids:
            grouped_edges |= session.pair.human.livegroups[gi]
        if edge not in grouped_edges:
            violation, kind = True, "livegroup"
            session.stats.violated_groups.update(group_ids)
    session.stats.record(opportunity, violation, kind)

    unsafe = edge in session.pair.human.unsafe
    events = session._advance(edge)
    record = MoveRecord(
        index=len(session.moves),
        owner="H",
        edge=edge,
        display=session.game.edge_display(edge),
        opportunity=opportunity,
        violation=violation,
        feedback_active=session.frequency_active(),
        frequency=session.frequency(),
        events=events,
        message=message.to_payload() if message else None,
    )
    session.moves.append(record)
    if unsafe or edge[1] not in session.pair.winning:
        handle_unsafe_transition(session)
    return record


def feedback_state(session: Session, alpha: float | None = None) -> FeedbackMessage | None:
    """Feedback shown at the current (human) vertex, or None.

    Unsafe warnings are independent of the threshold; live / co-live feedback
    is shown while the violation frequency strictly exceeds it.
    """
    alpha = session.alpha if alpha is None else alpha
    if session.status == "task_lost":
        return None
    v = session.current
    unsafe_here = session.unsafe_at.get(v, [])
    if unsafe_here and session.game.owners[v] is Owner.HUMAN:
        suggested = tuple(
            Suggestion(e, f"avoid: {session.game.edge_display(e)}") for e in sorted(unsafe_here)
        )
        return FeedbackMessage(
            UNSAFE_WARNING,
            suggested,
            session.frequency(),
            session.stats.opportunities,
            session.stats.violations,
        )
    frequency = session.frequency()
    if session.scope == "window":
        active = frequency > alpha and len(session.stats.window) > 0
    else:
        active = frequency > alpha
    if not active:
        return None
    by = session.stats.by_constraint
    kind = (
        COLIVE_DISCOURAGE
        if by.get("colive", 0) > by.get("livegroup", 0)
        else LIVE_SUGGESTION
    )
    suggested = _suggested_edges(session)
    return FeedbackMessage(
        kind,
        suggested,
        frequency,
        session.stats.opportunities,
        session.stats.violations,
    )


def _suggested_edges(session: Session) -> tuple[Suggestion, ...]:
    """Live edges of violated groups at the current vertex, else the nearest
    live-group source along the rank-descending path."""
    game = session.game
    groups = session.pair.human.livegroups

    def edges_here(vertex: int, violated_only: bool) -> list[Edge]:
        picked = []
        for gi in session.groups_at.get(vertex, []):
            if violated_only and gi not in session.stats.violated_groups:
                continue
            picked += [e for e in groups[gi] if e[0] == vertex]
        return sorted(set(picked))

    here = edges_here(session.current, violated_only=True)
    if not here and session.groups_at.get(session.current):
        here = edges_here(session.current, violated_only=False)
    if here:
        return tuple(Suggestion(e, session.game.edge_display(e)) for e in here)

    # walk down the progress ranking to the next constrained human vertex
    v = session.current
    seen = {v}
    for _ in range(game.num_vertices):
        candidates = [t for t in game.adjacency[v] if t in session.rank and t not in seen]
        if not candidates:
            break
        v = min(candidates, key=lambda t: (session.rank[t], t))
        seen.add(v)
        found = edges_here(v, violated_only=False)
        if found:
            return tuple(Suggestion(e, session.game.edge_display(e)) for e in found)
    return ()


def handle_unsafe_transition(session: Session) -> str:
    """Re-solve from the current vertex after non-compliance.

    If the current vertex still lies in a freshly computed winning region the
    new pair is installed and play continues; otherwise the task is lost and
    the session continues best-effort.
    """
    fresh = synthesize(session.game)
    session.resyntheses += 1
    if session.current in fresh.winning:
        session.pair = fresh.pair
        session.rank = fresh.rank
        session.budgets = {}
        session._index_templates()
        session.status = "active"
        return "resynthesized"
    session.status = "task_lost"
    return "task_lost"


# --------------------------------------------------------------------------
# Human models
# --------------------------------------------------------------------------


class ScriptedHuman:
    """Follows a list of action display texts; unavailable entries are
    skipped.  When the script is exhausted (and not looping) the fallback is
    to wait/pass when possible, else act uniformly."""

    def __init__(self, actions: Iterable[str], loop: bool = False):
        self.actions = list(actions)
        self.loop = loop
        self.position = 0

    def describe(self) -> dict:
        return {"kind": "scripted", "actions": self.actions, "loop": self.loop}

    def bind(self, domain: PlanningDomain) -> None:
        self.position = 0

    def choose(self, session: Session, legal: list[Edge], message, rng: random.Random) -> Edge:
        by_display = {}
        for edge in legal:
            by_display.setdefault(session.game.edge_display(edge), edge)
        attempts = len(self.actions)
        while attempts > 0:
            if self.position >= len(self.actions):
                if not self.loop:
                    break
                self.position = 0
            action = self.actions[self.position]
            self.position += 1
            attempts -= 1
            if action in by_display:
                return by_display[action]
        for idle in ("pass", "wait"):
            if idle in by_display:
                return by_display[idle]
        return legal[rng.randrange(len(legal))]


class ProbabilisticHuman:
    """Pursues a private task: with probability ``heed`` follows shown
    suggestions, else with probability ``compliance`` takes an edge that makes
    progress for its own task, else acts uniformly."""

    def __init__(self, task_text: str, compliance: float = 0.9, heed: float = 0.9):
        if not 0.0 <= compliance <= 1.0 or not 0.0 <= heed <= 1.0:
            raise ValueError("probabilities must lie in [0,1]")
        self.task_text = task_text
        self.compliance = compliance
        self.heed = heed
        self._game: ParityGame | None = None
        self._rank: dict[int, int] | None = None
        self._winning: frozenset[int] | None = None
        self._mstate: int | None = None

    def describe(self) -> dict:
        return {
            "kind": "probabilistic",
            "task": self.task_text,
            "compliance": self.compliance,
            "heed": self.heed,
        }

    def bind(self, domain: PlanningDomain) -> None:
        from .game import AttractorMode, attractor_layers

        task = parse_task(self.task_text, domain.propositions)
        monitor = compile_monitor(task)
        self._monitor = monitor
        self._game = product(domain, monitor)
        result = synthesize(self._game)
        winning = result.winning
        self._groups_at: dict[int, list[frozenset[Edge]]] = {}
        for group in result.pair.human.livegroups:
            for (u, _) in group:
                self._groups_at.setdefault(u, []).append(group)
        goals = {v for v in winning if self._game.colors[v] == 2}
        # cooperative shortest distance to the own goal set, for tie-breaking
        self._dist = attractor_layers(
            self._game, goals, AttractorMode.COOPERATIVE, within=winning
        )
        self._winning = frozenset(winning)

    def _sync(self, session: Session) -> int | None:
        """Track the private product vertex along the shared domain path."""
        domain = session.game.domain
        assert domain is not None and self._game is not None
        mstate = self._monitor.initial
        mstate = self._monitor.step(mstate, domain.label(domain.initial))
        for (_, dst) in session.history:
            s = session.game.origin[dst][0]
            mstate = self._monitor.step(mstate, domain.label(s))
        s_now = session.game.origin[session.current][0]
        return self._game.vertex_of_origin.get((s_now, mstate))

    def choose(self, session: Session, legal: list[Edge], message, rng: random.Random) -> Edge:
        if message is not None and rng.random() < self.heed:
            options = [s.edge for s in message.suggested if s.edge in legal]
            if options:
                return options[rng.randrange(len(options))]
            # feedback that is not actionable here: hold the own agenda back
            idle = [
                e for e in legal
                if session.game.edge_display(e) in ("wait", "pass")
            ]
            if idle:
                return idle[0]
        roll = rng.random()
        own = self._progress_edges(session, legal)
        if own and roll < self.compliance:
            return own[rng.randrange(len(own))]
        return legal[rng.randrange(len(legal))]

    def _progress_edges(self, session: Session, legal: list[Edge]) -> list[Edge]:
        """Edges serving the private task: the own template's live edges at
        the current state when it is constrained, else strictly
        distance-decreasing edges; ties broken toward the goal."""
        if self._game is None:
            return []
        mine = self._sync(session)
        if mine is None or mine not in self._dist:
            return []
        domain = session.game.domain
        here = self._dist[mine]
        mstate = self._game.origin[mine][1]

        def own_vertex(edge: Edge) -> int | None:
            s_next = session.game.origin[edge[1]][0]
            m_next = self._monitor.step(mstate, domain.label(s_next))
            return self._game.vertex_of_origin.get((s_next, m_next))

        grouped = set()
        for group in self._groups_at.get(mine, []):
            grouped |= {e for e in group if e[0] == mine}
        candidates: list[tuple[Edge, int]] = []
        for edge in legal:
            target = own_vertex(edge)
            if target is None or target not in self._dist:
                continue
            own_edge = (mine, target)
            in_group = own_edge in grouped
            decreasing = self._dist[target] < here
            if (grouped and in_group) or (not grouped and decreasing):
                candidates.append((edge, self._dist[target]))
        if not candidates:
            return []
        best = min(d for _, d in candidates)
        return [e for e, d in candidates if d == best]


# --------------------------------------------------------------------------
# Whole-run simulation
# --------------------------------------------------------------------------


@dataclass
class RunRecord:
    meta: dict
    moves: list[MoveRecord]
    status: str
    timed_out: bool = False

    def feedback_message_count(self) -> int:
        return sum(1 for m in self.moves if m.message is not None)

    def deliveries(self) -> list[tuple[int, str]]:
        out = []
        for m in self.moves:
            for e in m.events:
                if e.startswith("delivered_"):
                    out.append((m.index, e))
        return out

    def goal_visits(self) -> list[MoveRecord]:
        return [m for m in self.moves if "goal" in m.events]

    def to_jsonl(self) -> str:
        lines = [json.dumps({"type": "meta", **self.meta}, sort_keys=True)]
        lines += [json.dumps(m.to_json(), sort_keys=True) for m in self.moves]
        final = {
            "type": "final",
            "status": self.status,
            "timed_out": self.timed_out,
            "moves": len(self.moves),
            "deliveries": len(self.deliveries()),
            "feedback_messages": self.feedback_message_count(),
        }
        lines.append(json.dumps(final, sort_keys=True))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "RunRecord":
        meta: dict = {}
        moves: list[MoveRecord] = []
        status = "active"
        timed_out = False
        for line in text.splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            if entry["type"] == "meta":
                meta = {k: v for k, v in entry.items() if k != "type"}
            elif entry["type"] == "move":
                moves.append(
                    MoveRecord(
                        index=entry["i"],
                        owner=entry["owner"],
                        edge=(entry["src"], entry["dst"]),
                        display=entry["display"],
                        opportunity=entry["opp"],
                        violation=entry["vio"],
                        feedback_active=entry["fb"],
                        frequency=entry["freq"],
                        events=tuple(entry["events"]),
                        message=entry.get("msg"),
                    )
                )
            elif entry["type"] == "final":
                status = entry["status"]
                timed_out = entry.get("timed_out", False)
        return RunRecord(meta=meta, moves=moves, status=status, timed_out=timed_out)


def simulate(
    domain: PlanningDomain,
    robot_task: str | TaskFormula,
    human_model,
    alpha: float,
    max_moves: int,
    seed: int,
    stop_condition: tuple[str, int] | None = None,
    scope: str = "cumulative",
    window: int = 20,
    colive_budget: int = 3,
    timeout_s: float = 120.0,
    prepared: tuple[ParityGame, SynthesisResult] | None = None,
) -> RunRecord:
    """Run one seeded session to completion and return its full record."""
    task = (
        robot_task
        if isinstance(robot_task, TaskFormula)
        else parse_task(robot_task, domain.propositions)
    )
    if prepared is not None:
        game, synthesis = prepared
    else:
        game = product(domain, compile_monitor(task))
        synthesis = synthesize(game)
    session = Session(
        game,
        synthesis,
        alpha=alpha,
        seed=seed,
        scope=scope,
        window=window,
        colive_budget=colive_budget,
        task=task,
    )
    human_model.bind(domain)

    started = time.monotonic()
    timed_out = False
    while len(session.moves) < max_moves:
        if time.monotonic() - started > timeout_s:
            timed_out = True
            break
        if stop_condition is not None:
            kind, count = stop_condition
            reached = (
                session.delivery_count() if kind == "delivered" else session.goal_event_count()
            )
            if reached >= count:
                session.status = "completed"
                break
        if session.game.owners[session.current] is Owner.ROBOT:
            robot_step(session)
        else:
            message = feedback_state(session)
            if message is not None:
                session.feedback_messages += 1
            legal = session.legal_edges()
            edge = human_model.choose(session, legal, message, session.rng)
            observe_human(session, edge, message)

    meta = {
        "domain": domain.name,
        "task": task.to_text(),
        "alpha": alpha,
        "seed": seed,
        "scope": scope,
        "window": window,
        "colive_budget": colive_budget,
        "max_moves": max_moves,
        "stop": list(stop_condition) if stop_condition else None,
        "human": human_model.describe(),
    }
    return RunRecord(meta=meta, moves=session.moves, status=session.status, timed_out=timed_out)
