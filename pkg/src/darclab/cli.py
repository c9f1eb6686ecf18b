"""Command-line interface.

Subcommands:
  train  one seeded training run, outputs to --out
  sweep  algorithms x seeds cross-product with aggregates and an
         improvement table (first algorithm is the baseline)
  bias   training run with periodic estimator-bias measurement
  plot   render a curve.csv directory to an SVG
  check  run the estimator-inequality and gradient property suites

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 property violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .checks import run_all
from .errors import ConfigError, NumericalError
from .harness import RunConfig, emit_outputs, load_config, run_sweep, run_training, smooth
from .svgplot import render_curve


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p.strip()]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", help="algorithm name (ddpg/td3/daddpg/datd3/ctd3/darc)")
    p.add_argument("--env", help="environment name (goldminer/pointreach)")
    p.add_argument("--steps", type=int, help="total environment steps")
    p.add_argument("--warmup", type=int, help="uniform-action warmup steps")
    p.add_argument("--nu", type=float, help="soft-target weighting coefficient")
    p.add_argument("--lambda", dest="lam", type=float, help="critic regularization weight")
    p.add_argument("--lr", type=float, help="learning rate")
    p.add_argument("--hidden", help="hidden sizes, e.g. 64,64")
    p.add_argument("--mode", choices=("maxq", "first"), help="exploration mode")
    p.add_argument("--update-scheme", choices=("cross", "both"), dest="update_scheme")
    p.add_argument("--no-value-correction", action="store_true",
                   help="keep the second actor for exploration only")
    p.add_argument("--eval-interval", type=int, dest="eval_interval")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--out", help="output directory")


def _overrides(args: argparse.Namespace) -> dict:
    mapping = {
        "algo": "algorithm",
        "env": "env",
        "seed": "seed",
        "steps": "total_steps",
        "warmup": "warmup_steps",
        "nu": "nu",
        "lam": "lam",
        "lr": "learning_rate",
        "mode": "exploration_mode",
        "update_scheme": "update_scheme",
        "eval_interval": "eval_interval",
        "out": "out_dir",
        "bias_interval": "bias_interval",
        "bias_states": "bias_states",
        "bias_horizon": "bias_horizon",
    }
    out: dict = {}
    for arg_name, field in mapping.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            out[field] = value
    if getattr(args, "hidden", None):
        out["hidden_sizes"] = tuple(int(h) for h in args.hidden.split(","))
    if getattr(args, "no_value_correction", False):
        out["value_correction"] = False
    return out


def _build_config(args: argparse.Namespace) -> RunConfig:
    overrides = _overrides(args)
    if getattr(args, "config", None):
        return load_config(args.config, overrides)
    return RunConfig(**overrides)


def _cmd_train(args) -> int:
    cfg = _build_config(args)
    record = run_training(cfg)
    if cfg.out_dir:
        emit_outputs(record, cfg.out_dir)
    print(f"{cfg.algorithm} on {cfg.env} seed {cfg.seed}: final_score={record.final_score}")
    return 0


def _cmd_bias(args) -> int:
    if args.bias_interval is None:
        args.bias_interval = 2000
    return _cmd_train(args)


def _cmd_sweep(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    if not algos:
        raise ConfigError("sweep needs at least one algorithm")
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise ConfigError("sweep needs at least one seed")
    base = _build_config(args)
    summary = run_sweep(base, algos, seeds, args.out, workers=args.workers)
    for algo, entry in summary["algorithms"].items():
        line = f"{algo}: final {entry['final_mean']:.2f} +- {entry['final_std']:.2f}"
        if "improvement_percent" in entry:
            line += f" ({entry['improvement_percent']:.2f}% of {summary['baseline']})"
        print(line)
    return 0


def _cmd_plot(args) -> int:
    path = Path(args.in_dir) / "curve.csv"
    if not path.exists():
        raise ConfigError(f"no curve.csv under {args.in_dir}")
    steps, means, stds = [], [], []
    with path.open() as fh:
        for row in csv.DictReader(fh):
            steps.append(float(row["step"]))
            means.append(float(row["mean_return"]))
            stds.append(float(row["std_return"]))
    if args.window > 1:
        means = smooth(means, args.window)
    Path(args.out).write_text(render_curve(steps, means, stds, title=Path(args.in_dir).name))
    print(f"wrote {args.out}")
    return 0


def _cmd_check(args) -> int:
    results = run_all(seed=args.seed)
    for r in results:
        print(r.line())
    return 0 if all(r.ok for r in results) else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="darclab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run one seeded training run")
    _add_common(p)
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("sweep", help="run an algorithms x seeds cross-product")
    _add_common(p)
    p.add_argument("--algos", required=True, help="comma-separated algorithm names")
    p.add_argument("--seeds", required=True, help="e.g. 1..5 or 1,2,3")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_sweep)
    p.set_defaults(seed=None)

    p = sub.add_parser("bias", help="training run with periodic bias measurement")
    _add_common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--bias-interval", type=int, dest="bias_interval")
    p.add_argument("--bias-states", type=int, dest="bias_states")
    p.add_argument("--bias-horizon", type=int, dest="bias_horizon")
    p.set_defaults(fn=_cmd_bias, bias_interval=None)

    p = sub.add_parser("plot", help="render curve.csv in a directory to SVG")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=1, help="trailing smoothing window")
    p.set_defaults(fn=_cmd_plot)

    p = sub.add_parser("check", help="run the property suites")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
