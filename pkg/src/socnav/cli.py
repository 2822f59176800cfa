"""Command line front end: batch trial runs and the live operator service.

Exit codes for `run`: 0 all trials ran, 2 usage error (argparse), 3 replay
file mismatch, 1 configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .assistance import Condition
from .engine import run_trial
from .logio import config_to_dict, metrics_to_dict, read_trial, write_summary, write_trial
from .policies import ReplayPolicy, make_policy
from .rvo import RvoParams, RvoWeights
from .scenarios import ConfigurationError, PedConfig, ScenarioConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_USAGE = 2
EXIT_REPLAY_MISMATCH = 3

_LAYOUTS = {"a": "hall_a", "b": "hall_b"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socnav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run seeded batch trials and write logs + summary")
    run_p.add_argument("--scenario", choices=[p.value for p in PedConfig], default="crossing")
    run_p.add_argument("--layout", choices=["a", "b"], default="a")
    run_p.add_argument("--condition", choices=[c.value for c in Condition], default="hvt")
    run_p.add_argument("--policy", default="goal_seek",
                       help="goal_seek | compliant | noisy | replay:<file>")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--repeat", type=int, default=1)
    run_p.add_argument("--out", type=Path, default=Path("runs"))
    run_p.add_argument("--ped-count", type=int, default=None)
    run_p.add_argument("--max-duration", type=float, default=None)
    run_p.add_argument("--weights", type=str, default=None, metavar="W1,W2,W3")
    run_p.add_argument("--alpha", type=float, default=None)
    run_p.add_argument("--personal-radius", type=float, default=None)

    serve_p = sub.add_parser("serve", help="serve the live operator gateway (and UI, if built)")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=None,
                         help="default: $SOCNAV_PORT or 8000")
    serve_p.add_argument("--out", type=Path, default=Path("runs"))
    serve_p.add_argument("--ui", type=Path, default=None,
                         help="directory of built client assets to serve at /")
    return parser


def _config_for_args(args: argparse.Namespace, seed: int) -> ScenarioConfig:
    config = ScenarioConfig(
        layout=_LAYOUTS[args.layout],
        ped_config=PedConfig(args.scenario),
        seed=seed,
    )
    if args.ped_count is not None:
        config = replace(config, ped_count=args.ped_count)
    if args.max_duration is not None:
        config = replace(config, max_duration=args.max_duration)
    if args.personal_radius is not None:
        config = replace(config, ped_personal_radius=args.personal_radius)
    rvo = config.rvo
    if args.weights is not None:
        try:
            w1, w2, w3 = (float(v) for v in args.weights.split(","))
        except ValueError:
            raise SystemExit(EXIT_USAGE)
        rvo = replace(rvo, weights=RvoWeights(w1, w2, w3))
    if args.alpha is not None:
        rvo = replace(rvo, alpha=args.alpha)
    if rvo is not config.rvo:
        config = replace(config, rvo=rvo)
    return config


def _run_batch(args: argparse.Namespace) -> int:
    replay_source = None
    if args.policy.startswith("replay:"):
        replay_path = Path(args.policy.split(":", 1)[1])
        if args.repeat != 1:
            print("error: replay policy requires --repeat 1", file=sys.stderr)
            return EXIT_USAGE
        try:
            replay_source = read_trial(replay_path)
        except (OSError, ValueError) as exc:
            print(f"error: cannot read replay file: {exc}", file=sys.stderr)
            return EXIT_REPLAY_MISMATCH
    elif args.policy not in ("goal_seek", "compliant", "noisy", "noisy_goal_seek"):
        print(f"error: unknown policy {args.policy!r}", file=sys.stderr)
        return EXIT_USAGE

    args.out.mkdir(parents=True, exist_ok=True)
    condition = Condition(args.condition)
    entries = []
    for i in range(args.repeat):
        seed = args.seed + i
        config = _config_for_args(args, seed)
        if replay_source is not None:
            if config_to_dict(replay_source.config) != config_to_dict(config):
                print("error: replay file scenario/dt differs from requested configuration", file=sys.stderr)
                return EXIT_REPLAY_MISMATCH
            policy = ReplayPolicy([rec.stick for rec in replay_source.records])
        else:
            policy = make_policy(args.policy)
        try:
            result = run_trial(config, policy, condition)
        except ConfigurationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        name = f"trial_{condition.value}_{args.scenario}_{policy.name}_seed{seed}.jsonl"
        write_trial(
            args.out / name,
            config=config,
            condition=condition,
            policy=policy.name,
            records=result.log,
            metrics=result.metrics,
            completed=result.completed,
            reason=result.reason,
        )
        entries.append(
            {
                "file": name,
                "seed": seed,
                "condition": condition.value,
                "scenario": args.scenario,
                "completed": result.completed,
                "reason": result.reason,
                "metrics": metrics_to_dict(result.metrics),
            }
        )
        disagreement = result.metrics.mean_disagreement
        print(
            f"{name}: reason={result.reason} path={result.metrics.path_length:.2f}m "
            f"time={result.metrics.trial_time:.2f}s intrusions="
            f"{result.metrics.intimate_intrusions}/{result.metrics.personal_intrusions} "
            f"disagreement={'-' if disagreement is None else f'{disagreement:.4f}'}"
        )
    write_summary(args.out / "summary.jsonl", entries)
    return EXIT_OK


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .gateway import create_app

    port = args.port if args.port is not None else int(os.environ.get("SOCNAV_PORT", "8000"))
    ui_dir = args.ui
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = candidate if candidate.exists() else None
    app = create_app(out_dir=args.out, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _run_batch(args)
    return _serve(args)


if __name__ == "__main__":
    sys.exit(main())
