"""Command-line entry points: synth, simulate, experiment, serve.

Exit codes: 0 success, 2 configuration error, 3 synthesis failure (no
cooperative solution from the initial state), 4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time

from .errors import CapacityError, ConfigError, SynthesisError
from .experiment import (
    ExperimentConfig,
    HumanModelSpec,
    aggregate,
    build_domain,
    emit_metrics,
    prepare,
    run_experiment,
    scenario_config,
    scenario_names,
)
from .runtime import simulate
from .tasklogic import TaskSyntaxError
from .templates import serialize_template_pair


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, TaskSyntaxError, FileNotFoundError) as error:
        print(f"config error: {error}", file=sys.stderr)
        return 2
    except SynthesisError as error:
        print(f"synthesis failure: {error}", file=sys.stderr)
        return 3
    except CapacityError as error:
        print(f"capacity exceeded: {error}", file=sys.stderr)
        return 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tandem",
        description="strategy-template synthesis and adaptive turn-based execution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize the template pair for a domain and task")
    p_synth.add_argument("--domain", required=True, help="gridworld[:rows=3;cols=3;cap=3] | kitchen | file:PATH")
    p_synth.add_argument("--task", required=True, help="e.g. 'G F (adj & major)'")
    p_synth.add_argument("--out", help="write the template pair document here")
    p_synth.set_defaults(handler=cmd_synth)

    p_sim = sub.add_parser("simulate", help="run one session against a simulated human")
    p_sim.add_argument("--domain", required=True)
    p_sim.add_argument("--task", required=True)
    p_sim.add_argument("--human-model", default="probabilistic:task=G F true",
                       help="probabilistic:task=...;compliance=0.9;heed=0.9 | scripted:act1;act2[;loop]")
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--max-moves", type=int, default=500)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--stop-deliveries", type=int, default=None)
    p_sim.add_argument("--scope", choices=("cumulative", "window"), default="cumulative")
    p_sim.add_argument("--window", type=int, default=20)
    p_sim.add_argument("--colive-budget", type=int, default=3)
    p_sim.add_argument("--out", help="write the run record (JSON lines) here")
    p_sim.set_defaults(handler=cmd_simulate)

    p_exp = sub.add_parser("experiment", help="run a sweep and emit metrics")
    p_exp.add_argument("--scenario", help="|".join(scenario_names() + ["all"]))
    p_exp.add_argument("--domain")
    p_exp.add_argument("--task")
    p_exp.add_argument("--human-model")
    p_exp.add_argument("--alpha", default="0.0,0.02,0.04,0.07,0.1",
                       help="comma-separated thresholds")
    p_exp.add_argument("--runs", type=int, default=10)
    p_exp.add_argument("--max-moves", type=int, default=500)
    p_exp.add_argument("--seed", type=int, default=0, help="seed base; run i uses base+i")
    p_exp.add_argument("--out", help="metrics file (default stdout)")
    p_exp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_exp.add_argument("--aggregate-out", help="also write per-(scenario,alpha) aggregates")
    p_exp.set_defaults(handler=cmd_experiment)

    p_serve = sub.add_parser("serve", help="start the interactive session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--presets", default="gridworld,kitchen")
    p_serve.set_defaults(handler=cmd_serve)
    return parser


def cmd_synth(args) -> int:
    domain = build_domain(args.domain)
    started = time.monotonic()
    game, synthesis, _ = prepare(domain, args.task)
    elapsed = time.monotonic() - started
    pair = synthesis.pair
    document = serialize_template_pair(pair)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(document)
    else:
        print(document, end="")
    print(
        f"# domain states={domain.num_states} product vertices={game.num_vertices} "
        f"winning={len(pair.winning)}",
        file=sys.stderr,
    )
    print(
        f"# human: unsafe={len(pair.human.unsafe)} livegroups={len(pair.human.livegroups)}; "
        f"robot: unsafe={len(pair.robot.unsafe)} colive={len(pair.robot.colive)} "
        f"livegroups={len(pair.robot.livegroups)}",
        file=sys.stderr,
    )
    print(f"# synthesis time {elapsed:.2f}s", file=sys.stderr)
    return 0


def parse_human_model(text: str) -> HumanModelSpec:
    kind, _, rest = text.partition(":")
    if kind == "probabilistic":
        params = {"task": "G F true", "compliance": 0.9, "heed": 0.9}
        for chunk in rest.split(";"):
            if not chunk:
                continue
            key, _, value = chunk.partition("=")
            if key == "task":
                params["task"] = value
            elif key in ("compliance", "heed"):
                params[key] = float(value)
            else:
                raise ConfigError(f"unknown human model parameter {key!r}")
        return HumanModelSpec(kind="probabilistic", **params)
    if kind == "scripted":
        entries = [chunk for chunk in rest.split(";") if chunk]
        loop = False
        if entries and entries[-1] == "loop":
            loop = True
            entries = entries[:-1]
        return HumanModelSpec(kind="scripted", actions=tuple(entries), loop=loop)
    raise ConfigError(f"unknown human model kind {kind!r}")


def cmd_simulate(args) -> int:
    domain = build_domain(args.domain)
    spec = parse_human_model(args.human_model)
    record = simulate(
        domain,
        args.task,
        spec.build(),
        alpha=args.alpha,
        max_moves=args.max_moves,
        seed=args.seed,
        stop_condition=("delivered", args.stop_deliveries) if args.stop_deliveries else None,
        scope=args.scope,
        window=args.window,
        colive_budget=args.colive_budget,
    )
    text = record.to_jsonl()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    print(
        f"# status={record.status} moves={len(record.moves)} "
        f"deliveries={len(record.deliveries())} feedback={record.feedback_message_count()}",
        file=sys.stderr,
    )
    return 0


def cmd_experiment(args) -> int:
    alphas = tuple(float(x) for x in args.alpha.split(",") if x)
    configs: list[ExperimentConfig] = []
    if args.scenario:
        names = scenario_names() if args.scenario == "all" else [args.scenario]
        for name in names:
            configs.append(
                scenario_config(
                    name, alphas=alphas, runs=args.runs,
                    seed_base=args.seed, max_moves=args.max_moves,
                )
            )
    else:
        if not (args.domain and args.task and args.human_model):
            raise ConfigError("need --scenario or all of --domain/--task/--human-model")
        configs.append(
            ExperimentConfig(
                scenario="custom",
                domain_spec=args.domain,
                robot_task=args.task,
                human_model=parse_human_model(args.human_model),
                alphas=alphas,
                runs=args.runs,
                max_moves=args.max_moves,
                seed_base=args.seed,
            )
        )

    rows = []
    failures = []
    for config in configs:
        try:
            out, _ = run_experiment(config)
            rows.extend(out)
        except SynthesisError as error:
            failures.append((config.scenario, str(error)))
            print(f"# scenario {config.scenario}: synthesis failure: {error}", file=sys.stderr)
    text = emit_metrics(rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    if args.aggregate_out:
        import json

        with open(args.aggregate_out, "w", encoding="utf-8") as handle:
            for entry in aggregate(rows):
                handle.write(json.dumps(entry, sort_keys=True) + "\n")
    if failures and not rows:
        raise SynthesisError(f"all scenarios failed: {failures}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    names = tuple(x for x in args.presets.split(",") if x)
    app = create_app(names)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
