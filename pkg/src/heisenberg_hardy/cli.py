"""Command-line entry point: ``heisenberg-hardy verify`` and ``heisenberg-hardy sweep``."""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, HeisenbergError
from .runner import SUITES, SWEEP_PARAMS, emit_sweep, load_config, run, write_report

OUT_ENV = "HEISENBERG_HARDY_OUT"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenberg-hardy",
        description="Numerical verification of Hardy, Rellich and uncertainty inequalities on H^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites from a config file")
    v.add_argument("--config", required=True, help="flat key = value config file")
    v.add_argument("--suite", choices=SUITES + ("all",), default=None,
                   help="restrict to one suite (default: the config's selection)")
    v.add_argument("--out", default=None, help=f"output directory (else ${OUT_ENV}, else config)")
    v.add_argument("--seed", type=int, default=None, help="override the config seed")

    s = sub.add_parser("sweep", help="sweep one parameter of a catalog entry")
    s.add_argument("--case", required=True, help="catalog id, e.g. cor2.2-hardy")
    s.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    s.add_argument("--grid", required=True, help="comma-separated values")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default=None)
    return parser


def _out_dir(arg, cfg):
    return arg or os.environ.get(OUT_ENV) or cfg.out_dir


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.command == "verify":
            if args.suite and args.suite != "all":
                cfg.suites = (args.suite,)
            elif args.suite == "all":
                cfg.suites = SUITES
            report, status = run(cfg, seed=args.seed)
            for path in write_report(report, _out_dir(args.out, cfg), cfg.formats):
                print(path)
            n_cases = len(report["cases"])
            n_fail = sum(not r["pass"] for r in report["cases"])
            print(f"cases: {n_cases - n_fail}/{n_cases} pass; identities: "
                  f"{sum(r['pass'] for r in report['identities'])}/{len(report['identities'])} "
                  f"within tolerance; status {status}")
            return status
        try:
            grid = [float(x) for x in args.grid.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad grid {args.grid!r}") from None
        path, status = emit_sweep(args.case, args.param, grid, cfg, _out_dir(args.out, cfg))
        print(path)
        return status
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HeisenbergError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
