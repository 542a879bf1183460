#!/usr/bin/env python3
"""Reproduce the three kitchen scenario sweeps and write metrics + aggregates.

Usage: python scripts/run_kitchen_sweep.py [outdir]
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from tandem.experiment import aggregate, emit_metrics, run_experiment, scenario_config

ALPHAS = (0.0, 0.02, 0.04, 0.07, 0.1)


def main() -> None:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "results")
    outdir.mkdir(parents=True, exist_ok=True)
    all_rows = []
    for name in ("identical", "incompatible", "compatible"):
        config = scenario_config(name, alphas=ALPHAS, runs=10)
        rows, _ = run_experiment(config)
        all_rows.extend(rows)
        for entry in aggregate(rows):
            print(
                f"{entry['scenario']:<13} alpha={entry['alpha']:.2f} "
                f"robot={entry['mean_robot_pct']:5.1f}% human={entry['mean_human_pct']:5.1f}% "
                f"joint={entry['mean_joint_pct']:5.1f}% "
                f"feedback/turn={entry['mean_feedback_freq']:.3f}"
            )
    (outdir / "kitchen_metrics.csv").write_text(emit_metrics(all_rows, "csv"))
    with open(outdir / "kitchen_aggregates.jsonl", "w") as handle:
        for entry in aggregate(all_rows):
            handle.write(json.dumps(entry, sort_keys=True) + "\n")
    print(f"\nwrote {outdir}/kitchen_metrics.csv and {outdir}/kitchen_aggregates.jsonl")


if __name__ == "__main__":
    main()
