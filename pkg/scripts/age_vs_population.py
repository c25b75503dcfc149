#!/usr/bin/env python3
"""Best achievable age as the population grows from 60 to 1200, per positive rate."""

import sys
from pathlib import Path

from groupage.cli import main

OUT = Path(__file__).resolve().parent.parent / "results" / "age_vs_population.csv"

if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    code = main(
        ["age-vs-n", "--n-range", "60:1200:60", "--p-list", "0.01,0.1,0.2,0.4", "--out", str(OUT)]
    )
    print(f"wrote {OUT}")
    sys.exit(code)
