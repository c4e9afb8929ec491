"""Command line interface: run experiments, verify invariants, tabulate the
left-passage formula."""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="percotree",
        description="Monte Carlo experiments on disordered planar lattices: "
                    "minimal paths, spanning trees and interface statistics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config", help="path to a key=value config document")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the master seed")
    p_run.add_argument("--workers", type=int, default=None,
                       help="override the worker count")
    p_run.add_argument("--out", default=None,
                       help="override the output directory")

    p_ver = sub.add_parser("verify",
                           help="run the fast oracle and property suites")

    p_sch = sub.add_parser("schramm",
                           help="tabulate the left-passage formula to CSV")
    p_sch.add_argument("--kappa", type=float, default=6.0)
    p_sch.add_argument("--tmin", type=float, default=-1.5)
    p_sch.add_argument("--tmax", type=float, default=1.5)
    p_sch.add_argument("--n", type=int, default=101)
    p_sch.add_argument("--out", default="-", help="output CSV ('-' = stdout)")

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify()
    return _cmd_schramm(args)


def _cmd_run(args) -> int:
    from .harness import ConfigError, parse_config, run_experiment
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = parse_config(fh.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        config.seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    if args.out is not None:
        config.out = args.out
    try:
        paths = run_experiment(config)
    except Exception as exc:        # pragma: no cover - runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {paths['summary']}")
    return 0


def _cmd_schramm(args) -> int:
    from .observables import schramm_lpp
    ts = np.linspace(args.tmin, args.tmax, args.n)
    rows = [(float(t), float(schramm_lpp(float(t), args.kappa))) for t in ts]
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="",
                                                  encoding="utf-8")
    try:
        writer = csv.writer(out)
        writer.writerow(["t", "left_passage_probability"])
        for t, p in rows:
            writer.writerow([repr(t), repr(p)])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_verify() -> int:
    """Fast self-checks of the central equivalences and kernels."""
    from . import verify
    ok = verify.run_all(print)
    return 0 if ok else 2


if __name__ == "__main__":
    raise SystemExit(main())
