"""Command line entry point: ``fgnls run|predict|check``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 a check threshold was not met.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import MODES, load_config
from .errors import ConfigError
from .experiment import check, predict, run

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fgnls", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "evaluate fields on a grid and compare methods"),
                        ("predict", "elementary-function predictions and partition"),
                        ("check", "run configs and test their [check] thresholds")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", action="append", required=(name != "check"),
                       help="experiment file (repeatable for check; default configs/*.ini)")
        p.add_argument("--out", help="output directory (overrides [outputs] directory)")
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--p", type=float, help="visibility exponent in (0, 1]")
        p.add_argument("--grid", nargs=2, type=int, metavar=("NX", "NT"))
        p.add_argument("--gnuplot", action="store_true", help="also write |u| matrices")
    return ap


def _configs(args):
    paths = args.config
    if not paths:
        paths = sorted(str(p) for p in Path("configs").glob("*.ini"))
        if not paths:
            raise ConfigError("no --config given and no configs/*.ini found")
    out = []
    for i, path in enumerate(paths):
        cfg = load_config(path)
        out_dir = args.out
        if out_dir is not None and len(paths) > 1:
            out_dir = str(Path(out_dir) / Path(path).stem)
        out.append(cfg.with_overrides(mode=args.mode, p=args.p, grid=args.grid,
                                      out=out_dir, gnuplot=args.gnuplot))
    return out


def _dispatch(args) -> int:
    cfgs = _configs(args)
    if args.command == "run":
        rep = run(cfgs[0])
        print(json.dumps(rep.metrics, indent=2, sort_keys=True))
        return EXIT_OK
    if args.command == "predict":
        rep = predict(cfgs[0])
        for m in rep["modes"]:
            print(f"mode {m['mode']}: T1 = {m['T1']:.6f}  dT = {m['dT']:.6f}  "
                  f"X1 = {m['X1']:.6f}  dX = {m['dX']:.6f}")
        for s in rep["schedule"]:
            print(f"isolated mode {s['mode']} in [{s['t_start']:.4f}, {s['t_end']:.4f}]: "
                  f"T_max = {s['T_max']:.6f}  X_max = {s['X_max']:.6f}  M = {s['M']}")
        print("partition:", rep["metrics"]["partition_labels"])
        return EXIT_OK
    failed = 0
    for cfg in cfgs:
        if not cfg.checks:
            continue
        for r in check(cfg):
            print(r.line())
            failed += not r.passed
    return EXIT_CHECK if failed else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        where = f" ({args.config[0]})" if args.config else ""
        print(f"numerical error{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        where = f"{args.config[0]}: " if args.config else ""
        print(f"config error: {where}{exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
