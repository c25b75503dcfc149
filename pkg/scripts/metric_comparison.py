#!/usr/bin/env python3
"""Average age vs expected updates per group size for n=48, at a low and a high positive rate."""

import sys
from pathlib import Path

from groupage.cli import main

OUT = Path(__file__).resolve().parent.parent / "results" / "metric_comparison.csv"

if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    code = main(["compare-metrics", "--n", "48", "--p-list", "0.05,0.15", "--out", str(OUT)])
    print(f"wrote {OUT}")
    sys.exit(code)
