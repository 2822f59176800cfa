#!/usr/bin/env python3
"""Sweep the six control conditions across scenarios with a scripted
operator and print a table of the objective measures (means over seeds).

Example:
    python scripts/run_condition_sweep.py --policy compliant --seeds 10
"""

import argparse
import statistics
from pathlib import Path

from socnav.assistance import Condition
from socnav.engine import run_trial
from socnav.logio import metrics_to_dict, write_summary
from socnav.policies import make_policy
from socnav.scenarios import PedConfig, ScenarioConfig


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--policy", default="compliant")
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--scenarios", nargs="*", default=[p.value for p in PedConfig])
    parser.add_argument("--layout", choices=["hall_a", "hall_b"], default="hall_a")
    parser.add_argument("--max-duration", type=float, default=90.0)
    parser.add_argument("--out", type=Path, default=None, help="optional dir for summary.jsonl files")
    args = parser.parse_args()

    header = f"{'scenario':<10} {'cond':<5} {'intim':>6} {'pers':>6} {'path[m]':>8} {'time[s]':>8} {'disagree':>9} {'done':>5}"
    print(header)
    print("-" * len(header))
    for scenario in args.scenarios:
        for condition in Condition:
            rows = []
            completed = 0
            for seed in range(args.seeds):
                config = ScenarioConfig(
                    layout=args.layout,
                    ped_config=PedConfig(scenario),
                    seed=seed,
                    max_duration=args.max_duration,
                )
                result = run_trial(config, make_policy(args.policy), condition)
                completed += result.completed
                rows.append(result.metrics)
            def mean(xs):
                return statistics.fmean(xs) if xs else float("nan")

            disagreements = [m.mean_disagreement for m in rows if m.mean_disagreement is not None]
            disagree = f"{mean(disagreements):>9.4f}" if disagreements else f"{'-':>9}"
            print(
                f"{scenario:<10} {condition.value:<5} "
                f"{mean([m.intimate_intrusions for m in rows]):>6.2f} "
                f"{mean([m.personal_intrusions for m in rows]):>6.2f} "
                f"{mean([m.path_length for m in rows]):>8.2f} "
                f"{mean([m.trial_time for m in rows]):>8.2f} "
                f"{disagree} {completed:>4}/{args.seeds}"
            )
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                entries = [
                    {"seed": i, "condition": condition.value, "scenario": scenario,
                     "metrics": metrics_to_dict(m)}
                    for i, m in enumerate(rows)
                ]
                write_summary(args.out / f"sweep_{scenario}_{condition.value}.jsonl", entries)


if __name__ == "__main__":
    main()
