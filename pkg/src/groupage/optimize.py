"""Optimal group-size selection and efficiency thresholds.

Two metrics are minimized over the divisors of n: the expected number of
updates per cycle E[Y] (the pooled-testing metric) and the average age of
information. For E[Y] the continuous relaxation has stationary points
expressible through the two real branches of the Lambert W function, which
yields a six-candidate shortcut; the age metric has no tractable stationary
condition, so it is searched exhaustively.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from . import analytic
from .lambertw import BRANCH_POINT, lambert_w0, lambert_wm1
from .model import divisors, validate_config

__all__ = [
    "STATIONARY_P_MAX",
    "OptimizationResult",
    "StationaryPoints",
    "group_testing_efficiency_threshold",
    "stationary_group_sizes",
    "optimal_group_size_testing",
    "optimal_group_size_updating",
    "updating_efficiency_threshold",
    "kstar_sweep",
]

# Largest p for which the continuous E[Y] curve has interior stationary
# points: 1 - exp(-4/e^2), about 0.418.
STATIONARY_P_MAX = 1.0 - math.exp(-4.0 / math.e**2)


@dataclass(frozen=True)
class OptimizationResult:
    """Minimizer over the evaluated candidate group sizes; ties go to the smallest k."""

    optimal_k: int
    candidates: tuple[tuple[int, float], ...]
    metric: str  # "age" or "expected-updates"
    objective_at_optimum: float


@dataclass(frozen=True)
class StationaryPoints:
    """Real stationary group sizes of the continuous expected-updates curve, when they exist."""

    alpha1: float
    alpha2: float
    exists: bool


def group_testing_efficiency_threshold(k: int) -> float:
    """Largest p at which pooling groups of k beats one update per source: 1 - k**(-1/k)."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return -math.expm1(-math.log(k) / k)


def stationary_group_sizes(p: float) -> StationaryPoints:
    """Both stationary points of the continuous E[Y] curve, via the two Lambert W branches.

    Setting dE[Y]/dk = -n/k^2 - n(1-p)^k log(1-p) to zero reduces to
    x*exp(x) = -sqrt(-log(1-p))/2 with x = (k/2) log(1-p), solvable on both
    real branches while the right side stays >= -1/e, i.e. p <= STATIONARY_P_MAX.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"stationary points require 0 < p < 1, got p={p}")
    log_clear = math.log1p(-p)
    target = -0.5 * math.sqrt(-log_clear)
    if target < BRANCH_POINT:
        return StationaryPoints(alpha1=math.nan, alpha2=math.nan, exists=False)
    alpha1 = 2.0 * lambert_w0(target) / log_clear
    alpha2 = 2.0 * lambert_wm1(target) / log_clear
    return StationaryPoints(alpha1=alpha1, alpha2=alpha2, exists=True)


def _neighbor_divisors(alpha: float, divs: list[int]) -> tuple[int, int]:
    # nearest divisors below and above alpha, clamped to [1, n]
    if alpha < divs[0]:
        return divs[0], divs[0]
    if alpha > divs[-1]:
        return divs[-1], divs[-1]
    below = divs[bisect_right(divs, alpha) - 1]
    above = divs[bisect_left(divs, alpha)]
    return below, above


def _argmin_over(n: int, p: float, ks: list[int], objective, metric: str) -> OptimizationResult:
    evaluated = [(k, objective(validate_config(n, p, k))) for k in sorted(set(ks))]
    best_k, best_value = evaluated[0]
    for k, value in evaluated[1:]:
        if value < best_value:
            best_k, best_value = k, value
    return OptimizationResult(
        optimal_k=best_k,
        candidates=tuple(evaluated),
        metric=metric,
        objective_at_optimum=best_value,
    )


def optimal_group_size_testing(n: int, p: float) -> OptimizationResult:
    """Group size minimizing E[Y] over divisors of n.

    When the continuous stationary points exist, only 1, n, and the divisors
    bracketing each stationary point need checking; otherwise (p = 0, p = 1,
    or p above STATIONARY_P_MAX) every divisor is evaluated.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    divs = divisors(n)
    candidates = divs
    if 0.0 < p < 1.0:
        points = stationary_group_sizes(p)
        if points.exists:
            candidates = [1, n]
            for alpha in (points.alpha1, points.alpha2):
                below, above = _neighbor_divisors(alpha, divs)
                candidates.extend((below, above))
    return _argmin_over(n, p, candidates, analytic.expected_cycle_length, "expected-updates")


def optimal_group_size_updating(n: int, p: float) -> OptimizationResult:
    """Group size minimizing the average age, by exhaustive search over divisors of n."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return _argmin_over(n, p, divisors(n), analytic.average_age, "age")


def _beats_round_robin(n: int, p: float, divs: list[int], baseline: float) -> bool:
    return min(analytic.average_age(validate_config(n, p, k)) for k in divs) <= baseline


def updating_efficiency_threshold(n: int, tol: float = 1e-6) -> float:
    """Largest p for which grouped updating can still match round-robin age, by bisection.

    The efficiency condition min_k age(n, p, k) <= n/2 + 1 holds at p -> 0 and
    fails at p = 1; it is treated as monotone in p, with both bracket
    endpoints verified before bisecting.
    """
    if n < 2:
        raise ValueError(f"threshold requires n >= 2, got {n}")
    divs = divisors(n)
    baseline = analytic.round_robin_age(n)
    lo, hi = 0.0, 1.0
    if not _beats_round_robin(n, lo, divs, baseline):
        raise RuntimeError("efficiency condition unexpectedly fails at p=0")
    if _beats_round_robin(n, hi, divs, baseline):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _beats_round_robin(n, mid, divs, baseline):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kstar_sweep(n: int, p_values) -> list[tuple[float, int, int]]:
    """Optimal group sizes under both metrics for each p: (p, k for age, k for expected updates)."""
    return [
        (p, optimal_group_size_updating(n, p).optimal_k, optimal_group_size_testing(n, p).optimal_k)
        for p in p_values
    ]
