"""Command-line entry point: validate, check, sets, probe, experiment, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import NetinformError, NumericalBlowup, SchemaError
from .model import load, load_file
from .report import (
    check_report,
    experiment_report,
    parse_predictor_doc,
    probe_report,
    render,
    sets_report,
    validation_report,
)


def _positive_int(value: str) -> int:
    n = int(value)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _n_grid(value: str) -> list[int]:
    try:
        grid = [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N grid {value!r}") from None
    if not grid or any(n <= 0 for n in grid):
        raise argparse.ArgumentTypeError("N grid must be positive integers")
    return grid


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="netinform",
        description="Data-informativity analysis for single-module "
                    "identification in dynamic networks.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a network document")
    v.add_argument("--network", required=True)

    c = sub.add_parser("check", help="run the informativity condition checkers")
    c.add_argument("--network", required=True)
    c.add_argument("--predictor", help="separate predictor document")
    c.add_argument("--mode", choices=("generic", "numeric", "both"),
                   default="both")
    c.add_argument("--grid", type=_positive_int, default=256)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--probe", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-card", type=int, default=6)
    c.add_argument("--out", help="write the report JSON here")

    s = sub.add_parser("sets", help="derive every signal selection")
    s.add_argument("--network", required=True)
    s.add_argument("--predictor")
    s.add_argument("--out")

    pr = sub.add_parser("probe", help="Monte-Carlo genericity probe")
    pr.add_argument("--network", required=True)
    pr.add_argument("--predictor")
    pr.add_argument("--trials", type=_positive_int, default=100)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--out")

    e = sub.add_parser("experiment", help="Monte-Carlo consistency experiment")
    e.add_argument("--network", required=True)
    e.add_argument("--predictor")
    e.add_argument("--N-grid", type=_n_grid, required=True, dest="n_grid")
    e.add_argument("--runs", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--jobs", type=_positive_int, default=1)
    e.add_argument("--restarts", type=_positive_int, default=3)
    e.add_argument("--out", help="output directory")

    sv = sub.add_parser("serve", help="run the HTTP analysis service")
    sv.add_argument("--addr", default=None,
                    help="host:port (default NETINFORM_ADDR or 127.0.0.1:8321)")
    return p


def _load_inputs(args):
    net, pred = load_file(args.network)
    if getattr(args, "predictor", None):
        with open(args.predictor, "r", encoding="utf-8") as fh:
            pred = parse_predictor_doc(json.load(fh), net)
    if pred is None:
        raise NetinformError("no predictor model given (embed one in the "
                             "network document or pass --predictor)")
    return net, pred


def _emit(report: dict, out: str | None):
    text = render(report)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    print(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            net, pred = load_file(args.network)
            rep = validation_report(net, pred)
            print(render(rep))
            return 0 if rep["validation"]["ok"] else 1

        if args.command == "check":
            net, pred = _load_inputs(args)
            rep, code = check_report(net, pred, mode=args.mode, grid=args.grid,
                                     tol=args.tol, probe=args.probe,
                                     seed=args.seed, max_card=args.max_card)
            _emit(rep, args.out)
            return code

        if args.command == "sets":
            net, pred = _load_inputs(args)
            _emit(sets_report(net, pred), args.out)
            return 0

        if args.command == "probe":
            net, pred = _load_inputs(args)
            _emit(probe_report(net, pred, trials=args.trials, seed=args.seed),
                  args.out)
            return 0

        if args.command == "experiment":
            net, pred = _load_inputs(args)
            rep = experiment_report(net, pred, args.n_grid, runs=args.runs,
                                    seed=args.seed, jobs=args.jobs,
                                    restarts=args.restarts)
            if args.out:
                outdir = Path(args.out)
                outdir.mkdir(parents=True, exist_ok=True)
                (outdir / "report.json").write_text(render(rep) + "\n",
                                                    encoding="utf-8")
                (outdir / "errors.csv").write_text(rep["experiment_csv"],
                                                   encoding="utf-8")
            print(render(rep))
            return 0

        if args.command == "serve":
            from .service import run

            run(args.addr)
            return 0
    except FileNotFoundError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"error: malformed document: {exc}", file=sys.stderr)
        return 2
    except NumericalBlowup as exc:
        print(f"error: simulation blew up: {exc}", file=sys.stderr)
        return 1
    except NetinformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
