"""Command-line interface: simulate, figure, validate, config."""

import argparse
import os
import sys

from .config import default_config_text, load_config
from .errors import ConfigError
from .figures import FIGURE_IDS, run_figure
from .mobility import simulate_imm, simulate_rwp
from .validate import format_report, run_validation


def _add_common(parser):
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--seed", type=int, metavar="U64", help="master seed override")
    parser.add_argument("--workers", type=int, metavar="N", help="worker process count")
    parser.add_argument("--out", metavar="DIR", default=".", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="commnet",
        description="Hotspot small-cell network simulator: mobility, time fractions "
                    "and coverage probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="dump one trajectory as CSV")
    p_sim.add_argument("--model", choices=("imm", "rwp"), default="imm")
    p_sim.add_argument("--n-jumps", type=int, help="override configured jump count")
    _add_common(p_sim)

    p_fig = sub.add_parser("figure", help="run one experiment grid")
    p_fig.add_argument("--id", type=int, required=True, choices=FIGURE_IDS)
    p_fig.add_argument("--svg", action="store_true", help="also emit an SVG chart")
    _add_common(p_fig)

    p_val = sub.add_parser("validate", help="run the fast invariant suite")
    _add_common(p_val)

    p_cfg = sub.add_parser("config", help="configuration helpers")
    p_cfg.add_argument("--print-defaults", action="store_true")
    _add_common(p_cfg)
    return parser


def _config_from_args(args):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    return load_config(args.config, overrides)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "config":
            if args.print_defaults:
                sys.stdout.write(default_config_text())
            else:
                sys.stdout.write(str(_config_from_args(args)) + "\n")
            return 0

        cfg = _config_from_args(args)
        if args.command == "simulate":
            n_jumps = args.n_jumps or cfg.n_jumps
            layout = cfg.layout()
            if args.model == "imm":
                traj = simulate_imm(cfg.imm_params(), layout, n_jumps, cfg.seed)
            else:
                traj = simulate_rwp(cfg.v_mps, cfg.wait_out(), layout, n_jumps, cfg.seed)
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"trajectory_{args.model}.csv")
            traj.write_csv(path)
            sys.stdout.write(path + "\n")
            return 0

        if args.command == "figure":
            paths = run_figure(args.id, cfg, args.out, svg=args.svg)
            sys.stdout.write("\n".join(paths) + "\n")
            return 0

        # validate: failures are report content, not process errors
        checks = run_validation(cfg)
        sys.stdout.write(format_report(checks) + "\n")
        return 0
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except Exception as exc:  # computation errors
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
