"""Command-line experiment harness emitting CSV curves and validation reports.

Subcommands:
  age-vs-k        age per divisor group size, with the round-robin baseline
  age-vs-n        best achievable age as the population grows
  compare-metrics age and expected updates side by side per group size
  kstar-vs-p      optimal group sizes under both metrics across p
  simulate        Monte Carlo age estimates per seed, next to the closed form
  validate        closed forms vs exact oracles vs simulation, with exit code

CSV output goes to --out or standard output. Reals are rendered with 12
significant digits; rows are sorted by their key columns, so a command's
output is byte-identical across runs (given the same seeds).

Exit codes: 0 success, 1 usage error, 2 analytic validation mismatch,
3 statistical validation mismatch, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import analytic, sim
from .model import divisors, validate_config
from .optimize import kstar_sweep, optimal_group_size_testing, optimal_group_size_updating

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANALYTIC_MISMATCH = 2
EXIT_STATISTICAL_MISMATCH = 3
EXIT_IO = 4

ANALYTIC_RTOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors must exit 1
        raise UsageError(message)


def _parse_p_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise UsageError(f"invalid probability list {text!r}") from exc
    if not values:
        raise UsageError("probability list must not be empty")
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"probabilities must lie in [0, 1], got {p}")
    return values


def _parse_n_range(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected an n range start:stop:step, got {text!r}")
    try:
        start, stop, step = (int(part) for part in parts)
    except ValueError as exc:
        raise UsageError(f"invalid n range {text!r}") from exc
    if start < 1 or stop < start or step < 1:
        raise UsageError(f"invalid n range {text!r}")
    return list(range(start, stop + 1, step))


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise UsageError(f"invalid seed list {text!r}") from exc
    if not seeds:
        raise UsageError("seed list must not be empty")
    return seeds


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def _write_csv(header: list[str], rows: list[tuple], out_path: str | None) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def cmd_age_vs_k(n: int, p_list: list[float], out_path: str | None) -> int:
    """Rows (p, k, delta_group_updating, delta_round_robin, is_optimal) over divisors of n."""
    baseline = analytic.round_robin_age(n)
    rows = []
    for p in p_list:
        best_k = optimal_group_size_updating(n, p).optimal_k
        for k in divisors(n):
            age = analytic.average_age(validate_config(n, p, k))
            rows.append((p, k, age, baseline, k == best_k))
    rows.sort(key=lambda row: (row[0], row[1]))
    _write_csv(["p", "k", "delta_group_updating", "delta_round_robin", "is_optimal"], rows, out_path)
    return EXIT_OK


def cmd_age_vs_n(n_values: list[int], p_list: list[float], out_path: str | None) -> int:
    """Rows (p, n, k_star, delta_at_kstar, delta_round_robin); the optimizer runs per point."""
    rows = []
    for p in p_list:
        for n in n_values:
            result = optimal_group_size_updating(n, p)
            rows.append((p, n, result.optimal_k, result.objective_at_optimum, analytic.round_robin_age(n)))
    rows.sort(key=lambda row: (row[0], row[1]))
    _write_csv(["p", "n", "k_star", "delta_at_kstar", "delta_round_robin"], rows, out_path)
    return EXIT_OK


def cmd_compare_metrics(n: int, p_list: list[float], out_path: str | None) -> int:
    """Rows (p, k, delta, expected_updates, is_gu_optimal, is_gt_optimal) over divisors of n."""
    rows = []
    for p in p_list:
        k_age = optimal_group_size_updating(n, p).optimal_k
        k_updates = optimal_group_size_testing(n, p).optimal_k
        for k in divisors(n):
            config = validate_config(n, p, k)
            rows.append(
                (
                    p,
                    k,
                    analytic.average_age(config),
                    analytic.expected_cycle_length(config),
                    k == k_age,
                    k == k_updates,
                )
            )
    rows.sort(key=lambda row: (row[0], row[1]))
    _write_csv(
        ["p", "k", "delta", "expected_updates", "is_gu_optimal", "is_gt_optimal"],
        rows,
        out_path,
    )
    return EXIT_OK


def cmd_kstar_vs_p(n: int, p_list: list[float], out_path: str | None) -> int:
    """Rows (p, k_gu_star, k_gt_star) from the sweep over both optimizers."""
    rows = [tuple(entry) for entry in kstar_sweep(n, sorted(p_list))]
    _write_csv(["p", "k_gu_star", "k_gt_star"], rows, out_path)
    return EXIT_OK


def cmd_simulate(
    n: int, p: float, k: int, num_cycles: int, seeds: list[int], out_path: str | None
) -> int:
    """Per-seed simulated age and cycle moments next to their closed-form values."""
    config = validate_config(n, p, k)
    closed_age = analytic.average_age(config)
    rows = []
    for seed in sorted(seeds):
        trace = sim.simulate_cycles(config, num_cycles, seed)
        summary = sim.empirical_average_age(trace)
        moments = sim.empirical_moments(trace)
        rows.append(
            (
                n,
                p,
                k,
                num_cycles,
                seed,
                summary.overall_age,
                summary.standard_error,
                closed_age,
                moments.mean_cycle,
                moments.second_moment_cycle,
                moments.mean_service,
            )
        )
    _write_csv(
        [
            "n",
            "p",
            "k",
            "cycles",
            "seed",
            "age",
            "age_stderr",
            "age_closed_form",
            "mean_cycle",
            "cycle_second_moment",
            "mean_service",
        ],
        rows,
        out_path,
    )
    return EXIT_OK


def _relative_error(value: float, reference: float) -> float:
    scale = max(abs(reference), 1.0)
    return abs(value - reference) / scale


def cmd_validate(n: int, p: float, k: int, num_cycles: int, seeds: list[int]) -> int:
    """Check closed forms against both exact oracles and against simulation.

    Analytic legs must agree to relative 1e-9; each simulated quantity must
    land within 3 estimated standard errors of its closed form, for every
    seed. Zero-variance (deterministic) cases require exact equality.
    """
    config = validate_config(n, p, k)
    closed = analytic.closed_form_moments(config)
    analytic_ok = True
    statistical_ok = True

    def check_exact(label: str, candidate) -> None:
        nonlocal analytic_ok
        pairs = [
            ("mean_cycle", candidate.mean_cycle, closed.mean_cycle),
            ("second_moment_cycle", candidate.second_moment_cycle, closed.second_moment_cycle),
            ("mean_service", candidate.mean_service, closed.mean_service),
            ("average_age", candidate.average_age, closed.average_age),
        ]
        worst = max(_relative_error(value, reference) for _, value, reference in pairs)
        ok = worst <= ANALYTIC_RTOL
        analytic_ok = analytic_ok and ok
        print(f"{'PASS' if ok else 'FAIL'}: closed-form vs {label}: max relative error {worst:.3e}")

    check_exact("convolution-oracle", analytic.convolution_oracle(config))
    if n <= analytic.ENUMERATION_MAX_SOURCES:
        check_exact("enumeration-oracle", analytic.enumeration_oracle(config))
    else:
        print(f"SKIP: enumeration-oracle (needs n <= {analytic.ENUMERATION_MAX_SOURCES}, got n={n})")

    for seed in sorted(seeds):
        trace = sim.simulate_cycles(config, num_cycles, seed)
        summary = sim.empirical_average_age(trace)
        moments = sim.empirical_moments(trace)
        count = trace.num_cycles
        se_mean = float(trace.cycle_lengths.std(ddof=1)) / count**0.5
        squares = trace.cycle_lengths * trace.cycle_lengths
        se_second = float(squares.std(ddof=1)) / count**0.5
        per_cycle_service = trace.service_times.mean(axis=(1, 2))
        se_service = float(per_cycle_service.std(ddof=1)) / count**0.5
        legs = [
            ("age", summary.overall_age, closed.average_age, summary.standard_error),
            ("mean_cycle", moments.mean_cycle, closed.mean_cycle, se_mean),
            ("second_moment_cycle", moments.second_moment_cycle, closed.second_moment_cycle, se_second),
            ("mean_service", moments.mean_service, closed.mean_service, se_service),
        ]
        for label, value, reference, se in legs:
            ok = abs(value - reference) <= 3.0 * se
            statistical_ok = statistical_ok and ok
            print(
                f"{'PASS' if ok else 'FAIL'}: simulation seed={seed} {label}: "
                f"estimate {value:.6g} vs {reference:.6g} (3se = {3.0 * se:.3g})"
            )
    if not analytic_ok:
        return EXIT_ANALYTIC_MISMATCH
    if not statistical_ok:
        return EXIT_STATISTICAL_MISMATCH
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="groupage", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    avk = sub.add_parser("age-vs-k", help="age per group size against the round-robin baseline")
    avk.add_argument("--n", type=int, required=True)
    avk.add_argument("--p-list", type=str, required=True, help="comma-separated probabilities")
    avk.add_argument("--out", type=str, default=None)

    avn = sub.add_parser("age-vs-n", help="optimized age across population sizes")
    avn.add_argument("--n-range", type=str, required=True, help="start:stop:step (stop inclusive)")
    avn.add_argument("--p-list", type=str, required=True)
    avn.add_argument("--out", type=str, default=None)

    cmp_ = sub.add_parser("compare-metrics", help="age vs expected updates per group size")
    cmp_.add_argument("--n", type=int, required=True)
    cmp_.add_argument("--p-list", type=str, required=True)
    cmp_.add_argument("--out", type=str, default=None)

    ksp = sub.add_parser("kstar-vs-p", help="optimal group sizes under both metrics across p")
    ksp.add_argument("--n", type=int, required=True)
    ksp.add_argument("--p-list", type=str, required=True)
    ksp.add_argument("--out", type=str, default=None)

    simp = sub.add_parser("simulate", help="Monte Carlo age estimates per seed")
    simp.add_argument("--n", type=int, required=True)
    simp.add_argument("--p", type=float, required=True)
    simp.add_argument("--k", type=int, required=True)
    simp.add_argument("--cycles", type=int, default=100_000)
    simp.add_argument("--seeds", type=str, default="0")
    simp.add_argument("--out", type=str, default=None)

    val = sub.add_parser("validate", help="closed forms vs oracles vs simulation")
    val.add_argument("--n", type=int, required=True)
    val.add_argument("--p", type=float, required=True)
    val.add_argument("--k", type=int, required=True)
    val.add_argument("--cycles", type=int, default=100_000)
    val.add_argument("--seeds", type=str, default="0")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "age-vs-k":
            return cmd_age_vs_k(args.n, _parse_p_list(args.p_list), args.out)
        if args.command == "age-vs-n":
            return cmd_age_vs_n(_parse_n_range(args.n_range), _parse_p_list(args.p_list), args.out)
        if args.command == "compare-metrics":
            return cmd_compare_metrics(args.n, _parse_p_list(args.p_list), args.out)
        if args.command == "kstar-vs-p":
            return cmd_kstar_vs_p(args.n, _parse_p_list(args.p_list), args.out)
        if args.command == "simulate":
            if args.cycles < 2:
                raise UsageError("--cycles must be >= 2")
            return cmd_simulate(args.n, args.p, args.k, args.cycles, _parse_seeds(args.seeds), args.out)
        if args.command == "validate":
            if args.cycles < 2:
                raise UsageError("--cycles must be >= 2")
            return cmd_validate(args.n, args.p, args.k, args.cycles, _parse_seeds(args.seeds))
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
