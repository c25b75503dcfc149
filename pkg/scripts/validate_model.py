#!/usr/bin/env python3
"""Validate closed forms against the exact oracles and Monte Carlo on two configurations."""

import sys

from groupage.cli import main

CASES = [
    ["validate", "--n", "4", "--p", "0.5", "--k", "2", "--cycles", "100000", "--seeds", "0,1,2"],
    ["validate", "--n", "120", "--p", "0.1", "--k", "4", "--cycles", "100000", "--seeds", "0,1,2"],
]

if __name__ == "__main__":
    worst = 0
    for case in CASES:
        print(f"$ groupage {' '.join(case)}")
        worst = max(worst, main(case))
    sys.exit(worst)
