"""Command-line entry point.

Subcommands:
  check    run a model's full check suite on a metric and emit a report
  catalog  list the built-in metrics
  jets     dump the jet coordinates of a metric at a point (debugging)

Exit codes: 0 all checks pass, 1 a constraint family failed, 2 usage or
configuration error, 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import catalog
from .errors import ConfigError, DomainError, MsgravError
from .fieldspace import prolong
from .indexing import DIM, PAIRS, TRIPLES
from .report import CheckConfig, ConstraintReport, emit_report, run_check
from .version import VERSION


def _load_spec(source: str, params: dict) -> catalog.MetricSpec:
    if os.path.sep in source or source.endswith(".ini") or \
            os.path.exists(source):
        return catalog.load_metric_file(source)
    return catalog.builtin(source, **params)


def _parse_params(items):
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"expected name=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            out[key.strip()] = val.strip()
    return out


def _parse_tols(items):
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"expected family=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"tolerance {item!r} is not a number")
    return out


def _cmd_check(args) -> int:
    spec = _load_spec(args.metric, _parse_params(args.param))
    cfg = CheckConfig(model=args.model, spec=spec, points=args.points,
                      seed=args.seed, tolerances=_parse_tols(args.tol),
                      fmt=args.format)
    report = run_check(cfg)
    text = emit_report(report, fmt=args.format, path=args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0 if report.verdict == "pass" else 1


def _cmd_catalog(args) -> int:
    if args.action != "list":
        raise ConfigError(f"unknown catalog action {args.action!r}")
    for name in catalog.list_builtins():
        spec = catalog.builtin(name)
        box = ", ".join(f"x{i}:[{lo:g}, {hi:g}]"
                        for i, (lo, hi) in enumerate(spec.domain))
        print(f"{name:16s} vacuum={spec.vacuum:8s} {box}")
    return 0


def _cmd_jets(args) -> int:
    try:
        x = tuple(float(v) for v in args.at.split(","))
    except ValueError:
        raise ConfigError(f"bad point {args.at!r}")
    if len(x) != DIM:
        raise ConfigError("the point needs exactly 4 coordinates")
    spec = _load_spec(args.metric, _parse_params(args.param))
    p = prolong(catalog.metric_jet_at(spec, x, order=4), order=4)
    np.set_printoptions(precision=12, suppress=False)
    print(f"metric {spec.name!r} at x = {x}")
    for i, (a, b) in enumerate(PAIRS):
        print(f"g[{a}{b}] = {p.g[i]:.12g}")
    for i, (a, b) in enumerate(PAIRS):
        nz = {f"d{mu}": p.dg[i, mu] for mu in range(DIM)
              if abs(p.dg[i, mu]) > 1e-15}
        if nz:
            print(f"dg[{a}{b}] = " + ", ".join(
                f"{k}:{v:.12g}" for k, v in nz.items()))
    for i, (a, b) in enumerate(PAIRS):
        nz = {f"d{m}{n}": p.d2g[i, j] for j, (m, n) in enumerate(PAIRS)
              if abs(p.d2g[i, j]) > 1e-15}
        if nz:
            print(f"d2g[{a}{b}] = " + ", ".join(
                f"{k}:{v:.12g}" for k, v in nz.items()))
    for i, (a, b) in enumerate(PAIRS):
        nz = {f"d{m}{n}{r}": p.d3g[i, j]
              for j, (m, n, r) in enumerate(TRIPLES)
              if abs(p.d3g[i, j]) > 1e-15}
        if nz:
            print(f"d3g[{a}{b}] = " + ", ".join(
                f"{k}:{v:.12g}" for k, v in nz.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="msgrav",
        description="Multisymplectic verification checks for the "
                    "second-order metric and first-order metric-affine "
                    "gravity models.")
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run the check suite on a metric")
    chk.add_argument("--model", required=True, choices=("eh", "ep"))
    chk.add_argument("--metric", required=True,
                     help="builtin name or metric definition file")
    chk.add_argument("--points", type=int, default=20)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--tol", action="append", metavar="FAMILY=VAL")
    chk.add_argument("--param", action="append", metavar="NAME=VAL",
                     help="builtin metric parameter override")
    chk.add_argument("--format", choices=("json", "csv"), default="json")
    chk.add_argument("--out", default=None)
    chk.set_defaults(func=_cmd_check)

    cat = sub.add_parser("catalog", help="inspect the builtin metrics")
    cat.add_argument("action", choices=("list",))
    cat.set_defaults(func=_cmd_catalog)

    jets = sub.add_parser("jets", help="dump jet coordinates at a point")
    jets.add_argument("--metric", required=True)
    jets.add_argument("--at", required=True, metavar="x0,x1,x2,x3")
    jets.add_argument("--param", action="append", metavar="NAME=VAL")
    jets.set_defaults(func=_cmd_jets)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return 3
    except MsgravError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
