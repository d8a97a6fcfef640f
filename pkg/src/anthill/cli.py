"""``anthill`` command line: bench, antenna, sweep and compare.

Exit codes: 0 success, 2 configuration error, 3 output error.
"""
from __future__ import annotations

import argparse
import sys

from .experiment import ALGORITHMS, ConfigError, OutputError, compare, parse_config, run_experiment


def _seed_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}") from None


def _csv_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _common(p: argparse.ArgumentParser, multi_config: bool = False) -> None:
    if multi_config:
        p.add_argument("--config", action="append", help="JSON config; repeat once per algorithm")
    else:
        p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--algorithm", help=f"one of {', '.join(ALGORITHMS)}")
    p.add_argument("--benchmark", help="F1..F7")
    p.add_argument("--dim", type=int)
    p.add_argument("--pop", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--seeds", type=_seed_list, help="comma-separated, e.g. 1,2,3")
    p.add_argument("--out", help="output directory (default: $ANTHILL_OUT_DIR or ./anthill_out)")
    p.add_argument("--jobs", type=int, help="seeds run in parallel")
    p.add_argument("--s-min", dest="s_min", type=float, help="terminal shrink factor")
    p.add_argument("--shape", choices=["pyramid", "cone"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anthill", description="Ant hill colonization optimizer experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("bench", help="optimize one benchmark function"))

    p = sub.add_parser("antenna", help="side-lobe synthesis of a linear array")
    _common(p)
    p.add_argument("--elements", dest="n_elements", type=int)
    p.add_argument("--spacing", type=float, help="element spacing in wavelengths")
    p.add_argument("--variables", choices=["amplitudes", "amplitudes+phases"])
    p.add_argument("--symmetric", action="store_true", default=None)
    p.add_argument("--null", dest="null_targets", action="append", type=float, nargs=2,
                   metavar=("THETA_DEG", "TARGET_DB"), help="null target; repeatable")
    p.add_argument("--null-weight", dest="null_weight", type=float)
    p.add_argument("--resolution", type=float, help="pattern grid step in degrees")

    p = sub.add_parser("sweep", help="run over several benchmarks and dimensions")
    _common(p)
    p.add_argument("--benchmarks", type=_csv_list, help="e.g. F1,F5")
    p.add_argument("--dims", type=_seed_list, help="e.g. 30,200")

    p = sub.add_parser("compare", help="several algorithms at equal budgets")
    _common(p, multi_config=True)
    p.add_argument("--algorithms", type=_csv_list, help="e.g. ahcoa,alo,random")
    p.add_argument("--mode", choices=["bench", "antenna"])
    return parser


_NOT_CONFIG = {"command", "config", "algorithms"}


def _overrides(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}


def _run_compare(args: argparse.Namespace) -> dict:
    over = _overrides(args)
    paths = args.config or [None]
    if len(paths) > 1:
        if args.algorithms:
            raise ConfigError("use either several --config files or --algorithms, not both")
        configs = [parse_config(p, over) for p in paths]
    else:
        names = args.algorithms or ["ahcoa", "alo", "random"]
        configs = [parse_config(paths[0], {**over, "algorithm": n}) for n in names]
    result = compare(configs)
    print("seed," + ",".join(result["algorithms"]))
    for seed in configs[0].seeds:
        print(f"{seed}," + ",".join(f"{result['per_seed'][a][seed]:.6g}" for a in result["algorithms"]))
    print("median," + ",".join(f"{result['median'][a]:.6g}" for a in result["algorithms"]))
    return result


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            _run_compare(args)
            return 0
        over = {**_overrides(args), "mode": args.command}
        cfg = parse_config(args.config, over)
        summary = run_experiment(cfg)
        if cfg.mode == "sweep":
            for key, s in summary["cells"].items():
                print(f"{key}: median best {s['best_fitness']['median']:.6g}")
        else:
            for run in summary["runs"]:
                print(f"seed {run['seed']}: best {run['best_fitness']:.6g} "
                      f"({run['evaluations']} evaluations, {run['wall_clock_s']:.2f} s)")
            print(f"median best {summary['best_fitness']['median']:.6g}")
            if cfg.mode == "antenna":
                print(f"uniform array max SLL {summary['uniform_max_sll_db']:.2f} dB")
    except ConfigError as exc:
        print(f"anthill: config error: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"anthill: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
