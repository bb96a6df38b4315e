"""Run every shipped configuration and print its checks.

    python scripts/run_all.py [--out out] [configs/*.ini ...]
"""
import argparse
import sys
from pathlib import Path

from fgnls.cli import main

ROOT = Path(__file__).resolve().parent.parent


def cli():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", nargs="*")
    ap.add_argument("--out", default=str(ROOT / "out"))
    a = ap.parse_args()
    paths = a.configs or sorted(str(p) for p in (ROOT / "configs").glob("*.ini"))
    worst = 0
    for p in paths:
        out = str(Path(a.out) / Path(p).stem)
        print(f"== {p}")
        code = main(["check", "--config", p, "--out", out])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(cli())
