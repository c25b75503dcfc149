#!/usr/bin/env python3
"""Age per group size for n=120 across several positive rates, with the round-robin baseline."""

import sys
from pathlib import Path

from groupage.cli import main

OUT = Path(__file__).resolve().parent.parent / "results" / "age_vs_group_size.csv"

if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    code = main(["age-vs-k", "--n", "120", "--p-list", "0.01,0.1,0.2,0.4", "--out", str(OUT)])
    print(f"wrote {OUT}")
    sys.exit(code)
