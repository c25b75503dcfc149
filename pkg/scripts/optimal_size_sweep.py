#!/usr/bin/env python3
"""Optimal group sizes under both metrics for n=120, sweeping p from 0.01 to 0.25."""

import sys
from pathlib import Path

from groupage.cli import main

OUT = Path(__file__).resolve().parent.parent / "results" / "optimal_size_sweep.csv"

if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    grid = ",".join(f"{i / 100:.2f}" for i in range(1, 26))
    code = main(["kstar-vs-p", "--n", "120", "--p-list", grid, "--out", str(OUT)])
    print(f"wrote {OUT}")
    sys.exit(code)
