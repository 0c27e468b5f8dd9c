"""Experiment runner and command-line interface.

Produces CSV with the fixed schema

    algorithm,n,p_n,source,comparisons,constant_c,seed,trials

where constant_c = (comparisons - n lg n) / n and seed/trials are empty for
rows that used no randomness.  Subcommands:

    sort      sort one seeded permutation and report its comparison count
    expect    exact expected comparisons (round-exact engine)
    mc        Monte Carlo mean over seeded trials
    formulas  closed-form totals over a range of n
    fig1      constant-vs-deviation curves for the paired-insertion sorters,
              the combination and merge-insertion
    fig2      all-pairs merge cost versus its formula, over a range of n
    verify    run the built-in invariant suites (exit 1 on failure)

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Everything is seed-driven; reruns with the same flags are bit-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import analytics, oracles, rhbs
from .core import Tally, is_sorted_permutation, mix_seed, pow2_ratio, random_permutation
from .oracles import ALGORITHMS
from .two_merge import two_merge

CSV_COLUMNS = ("algorithm", "n", "p_n", "source", "comparisons", "constant_c", "seed", "trials")


@dataclass(frozen=True)
class ResultRow:
    """One CSV record; constant_c is always (comparisons - n lg n) / n."""

    algorithm: str
    n: int
    p_n: float
    source: str
    comparisons: float
    constant_c: float
    seed: int | None = None
    trials: int | None = None


def make_row(algorithm, n, source, comparisons, seed=None, trials=None) -> ResultRow:
    comparisons = float(comparisons)
    constant = (comparisons - n * math.log2(n)) / n if n >= 2 else 0.0
    return ResultRow(algorithm, n, pow2_ratio(n), source, comparisons, constant, seed, trials)


def write_csv(rows, out) -> None:
    """Write rows to a file object (UTF-8, LF, '.' decimal point, stable header)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.algorithm,
                row.n,
                repr(row.p_n),
                row.source,
                repr(row.comparisons),
                repr(row.constant_c),
                "" if row.seed is None else row.seed,
                "" if row.trials is None else row.trials,
            ]
        )


def rows_to_csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# figure experiments


@dataclass(frozen=True)
class Fig1Spec:
    """Sampling plan for the constant-vs-deviation experiment."""

    n_from: int
    n_to: int
    step: int = 2
    seed: int = 0
    trials: int = 2000
    exact_cap: int = oracles.EXACT_CAP
    processes: int | None = None


def run_fig1(spec: Fig1Spec):
    """Constant-c rows for one_two, one_two_star, combination, merge_insertion.

    Exact engine rows up to the cap; beyond it a formula row plus a Monte
    Carlo row per algorithm.  Merge-insertion is always sampled.
    """
    if spec.n_from < 4 or spec.n_from % 2 or spec.step % 2 or spec.step < 2:
        raise ValueError("fig1 needs even n_from >= 4 and even step >= 2")
    rows = []
    for n in range(spec.n_from, spec.n_to + 1, spec.step):
        for k, alg in enumerate(analytics.FORMULA_ALGORITHMS):
            if n <= spec.exact_cap:
                exp = oracles.exact_sort_expectation(
                    alg,
                    n,
                    prefix_trials=max(spec.trials, 1),
                    seed=mix_seed(spec.seed, n + k),
                    processes=spec.processes,
                )
                used_mc = exp.source == "monte_carlo"
                rows.append(
                    make_row(
                        alg,
                        n,
                        exp.source,
                        exp.value,
                        spec.seed if used_mc else None,
                        spec.trials if used_mc else None,
                    )
                )
            else:
                rows.append(make_row(alg, n, "formula", analytics.total_formula(alg, n)))
                exp = oracles.monte_carlo(
                    alg, n, spec.trials, mix_seed(spec.seed, 8 * n + k), spec.processes
                )
                rows.append(make_row(alg, n, "monte_carlo", exp.value, spec.seed, spec.trials))
        exp = oracles.monte_carlo(
            "merge_insertion", n, spec.trials, mix_seed(spec.seed, 8 * n + 7), spec.processes
        )
        rows.append(make_row("merge_insertion", n, "monte_carlo", exp.value, spec.seed, spec.trials))
    return rows


def run_fig2(n_to: int, step: int = 128, variant: str = "star", processes=None):
    """All-pairs merge cost (exact oracle) next to its closed-form value.

    Two rows per sampled even n: source "exact" holds the enumerated mean over
    all rank pairs, source "formula" the per-step formula doubled.  Here the
    sorted-sequence target length equals the row's n.
    """
    if n_to > oracles.PAIR_CAP:
        raise ValueError(f"fig2 capped at n <= {oracles.PAIR_CAP}, got {n_to}")
    if step < 2 or step % 2:
        raise ValueError("fig2 needs an even step >= 2")
    if variant not in ("plain", "star"):
        raise ValueError(f"unknown variant {variant!r}")
    formula = analytics.star_pair_formula if variant == "star" else analytics.two_merge_pair_formula
    rows = []
    start = max(step, 4)
    for n in range(start, n_to + 1, step):
        oracle = oracles.pair_enumeration_expectation(variant, n, processes=processes)
        name = f"two_merge_{variant}"
        rows.append(make_row(name, n, "exact", oracle.mean))
        rows.append(make_row(name, n, "formula", formula(n)))
    return rows


# ---------------------------------------------------------------------------
# invariant suites


def _check(checks, name, ok, detail=""):
    checks.append({"name": name, "ok": bool(ok), "detail": detail})


def _reference_gap_cost(m: int, gap: int) -> int:
    # Walk the search tree on indices alone, driven by the public pivot rule.
    lo, hi = 0, m
    cost = 0
    while lo < hi:
        d = rhbs.rhbs_pivot(hi - lo)
        cost += 1
        probe = lo + d - 1
        if probe >= gap:
            hi = probe
        else:
            lo = probe + 1
    return cost


def _verify_rhbs(limit: int = 256):
    checks = []
    _check(checks, "pivot small probes", rhbs.rhbs_pivot(11) == 4 and rhbs.rhbs_pivot(12) == 5)
    ok_band = ok_suffix = ok_census = ok_mean = ok_model = ok_ref = True
    for m in range(1, limit + 1):
        seq = [2 * k for k in range(1, m + 1)]
        costs = []
        for gap in range(m + 1):
            tally = Tally()
            out = rhbs.rhbs_insert(2 * gap + 1, seq, tally)
            if out != sorted(seq + [2 * gap + 1]):
                ok_model = False
            costs.append(tally.count)
        q = m.bit_length()  # == ceil(lg(m + 1))
        ok_band &= set(costs) <= {q - 1, q}
        ok_suffix &= costs == sorted(costs)
        ok_census &= sum(1 for c in costs if c == q - 1) == (1 << q) - (m + 1)
        ok_mean &= sum(costs) == rhbs.rhbs_average(m + 1) * (m + 1)
        ok_model &= all(rhbs.rhbs_gap_cost(m + 1, g) == costs[g] for g in range(m + 1))
        ok_ref &= all(_reference_gap_cost(m, g) == costs[g] for g in range(m + 1))
    _check(checks, f"cost band q-1/q (m <= {limit})", ok_band)
    _check(checks, "expensive gaps form a suffix", ok_suffix)
    _check(checks, "cheap-gap census 2^q - gaps", ok_census)
    _check(checks, "mean equals closed form exactly", ok_mean)
    _check(checks, "gap-cost model matches real inserts", ok_model)
    _check(checks, "public pivot rule drives the same walk", ok_ref)
    return checks


def _verify_two_merge():
    checks = []
    ok_sorted = ok_swap = ok_blocks = True
    for variant in ("plain", "star"):
        for i in (4, 6, 8, 12, 16, 32):
            seq = [3 * k for k in range(1, i - 1)]
            for a in range(1, i):
                for b in range(a + 1, i + 1):
                    x, y = 3 * a - 2, 3 * b - 4
                    t1, t2 = Tally(), Tally()
                    out = two_merge(x, y, seq, t1, variant)
                    ok_sorted &= out == sorted(seq + [x, y])
                    ok_swap &= two_merge(y, x, seq, t2, variant) == out and t1.count == t2.count
            enum = oracles.pair_enumeration_expectation(variant, i)
            exact = oracles.round_expectation_exact(variant, i)
            ok_blocks &= enum.mean == exact.mean
            ok_blocks &= enum.stop_distribution == exact.stop_distribution
            ok_blocks &= sum(enum.stop_distribution.values()) == 1
    _check(checks, "merge output sorted for all rank pairs", ok_sorted)
    _check(checks, "argument order cannot matter", ok_swap)
    _check(checks, "block engine matches enumerated runs exactly", ok_blocks)
    return checks


def _verify_formulas():
    checks = []
    grid = [0.5 + (k + 1) * 0.5 / 2002 for k in range(2001)]
    ok_identity = True
    for p in grid:
        if analytics.PLAIN_WINDOW[0] < p <= analytics.PLAIN_WINDOW[1]:
            u_half = analytics._pair_extra_ratio(p, p) / 2 + 1.5
            ok_identity &= abs(u_half - analytics.per_step_extra_plain(p)) < 1e-9
    _check(checks, "pair extra halves onto the plain step curve", ok_identity)
    ok_window = True
    for p in grid:
        slack = 1 - 1 / p
        d_plain = analytics.per_step_extra_plain(p)
        d_star = analytics.per_step_extra_star(p)
        if analytics.PLAIN_WINDOW[0] + 1e-4 < p < analytics.PLAIN_WINDOW[1] - 1e-4:
            ok_window &= d_plain < slack
        if analytics.STAR_WINDOW[0] + 1e-4 < p < analytics.STAR_WINDOW[1] - 1e-4:
            ok_window &= d_star < slack
        if p < analytics.STAR_WINDOW[0] - 1e-4 or p > analytics.STAR_WINDOW[1] + 1e-4:
            ok_window &= d_star >= slack - 1e-12
    _check(checks, "merge beats plain insertion exactly inside the windows", ok_window)
    lo, hi = analytics.STAR_WINDOW
    edge = max(
        abs(analytics.per_step_extra_star(lo + 1e-13) - (1 - 1 / lo)),
        abs(analytics.per_step_extra_star(hi) - (1 - 1 / hi)),
    )
    _check(checks, "starred window edges are exact curve roots", edge < 1e-9, f"edge gap {edge:.2e}")
    ident = abs(analytics.sum_via_integral(lambda x: 1.0, 3 * 2**6) - 3 * 2**6)
    _check(checks, "integral shortcut is exact for f == 1", ident < 1e-6)
    return checks


def _verify_oracles():
    checks = []
    ok_engines = True
    for alg in ALGORITHMS:
        for n in (2, 4, 6):
            ex = oracles.exhaustive_average(alg, n)
            en = oracles.exact_sort_expectation(alg, n)
            ok_engines &= ex.value == en.value
    _check(checks, "exhaustive equals round-exact for n <= 6", ok_engines)
    ok_pairs = all(
        oracles.pair_enumeration_expectation(v, i).mean == oracles.round_expectation_exact(v, i).mean
        for v in ("plain", "star")
        for i in range(4, 33, 2)
    )
    _check(checks, "pair enumeration equals block engine for i <= 32", ok_pairs)
    return checks


def _verify_sortedness():
    checks = []
    ok_small = True
    try:
        for alg in ALGORITHMS:
            for n in range(1, 7):
                if alg == "combination" and n % 2:
                    continue
                oracles.exhaustive_average(alg, n)  # raises on any unsorted output
    except AssertionError:
        ok_small = False
    _check(checks, "exhaustive sortedness n <= 6", ok_small)
    ok_random = True
    for alg in ALGORITHMS:
        for n in (34, 100, 258):
            ok_random &= oracles.sortedness_scan(alg, n, 20, seed=n) == 0
    _check(checks, "seeded spot checks sort correctly", ok_random)
    return checks


VERIFY_SUITES = {
    "rhbs": _verify_rhbs,
    "two_merge": _verify_two_merge,
    "formulas": _verify_formulas,
    "oracles": _verify_oracles,
    "sortedness": _verify_sortedness,
}


def run_verify(suite: str) -> dict:
    """Run one invariant suite (or "all"); returns a JSON-ready report."""
    if suite == "all":
        names = list(VERIFY_SUITES)
    elif suite in VERIFY_SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {['all', *VERIFY_SUITES]}")
    checks = []
    for name in names:
        for check in VERIFY_SUITES[name]():
            checks.append({"suite": name, **check})
    return {"suite": suite, "ok": all(c["ok"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# command line


def _emit(rows, path) -> None:
    if path in (None, "-"):
        write_csv(rows, sys.stdout)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            write_csv(rows, handle)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sortlab",
        description="comparison-counting sorting laboratory",
    )
    parser.add_argument("--processes", type=int, default=None, help="worker processes for heavy runs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="sort one seeded permutation and count comparisons")
    p.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("expect", help="exact expected comparisons")
    p.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--policy", default="auto", choices=["auto", "combination", "merge_insertion"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("mc", help="Monte Carlo mean comparisons")
    p.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("formulas", help="closed-form totals over a range of n")
    p.add_argument("--alg", required=True, choices=["binary", *analytics.FORMULA_ALGORITHMS])
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--step", type=int, default=2)
    p.add_argument("--out", default="-")

    p = sub.add_parser("fig1", help="constant-vs-deviation curves")
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--step", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--out", default="-")

    p = sub.add_parser("fig2", help="all-pairs merge cost vs formula")
    p.add_argument("--to", dest="n_to", type=int, default=1024)
    p.add_argument("--step", type=int, default=128)
    p.add_argument("--variant", default="star", choices=["plain", "star"])
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all", choices=["all", *VERIFY_SUITES])
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sort":
            perm = random_permutation(args.n, args.seed)
            tally = Tally()
            out = ALGORITHMS[args.alg](perm, tally)
            if not is_sorted_permutation(perm, out):
                print(f"{args.alg} failed to sort n={args.n} seed={args.seed}", file=sys.stderr)
                return 1
            _emit([make_row(args.alg, args.n, "monte_carlo", tally.count, args.seed, 1)], args.out)
        elif args.command == "expect":
            exp = oracles.exact_sort_expectation(
                args.alg, args.n, policy=args.policy, seed=args.seed, processes=args.processes
            )
            seed = args.seed if exp.source == "monte_carlo" else None
            _emit([make_row(args.alg, args.n, exp.source, exp.value, seed)], args.out)
        elif args.command == "mc":
            exp = oracles.monte_carlo(args.alg, args.n, args.trials, args.seed, args.processes)
            _emit(
                [make_row(args.alg, args.n, "monte_carlo", exp.value, args.seed, args.trials)],
                args.out,
            )
        elif args.command == "formulas":
            rows = []
            for n in range(args.n_from, args.n_to + 1, args.step):
                total = (
                    analytics.binary_sort_formula(n)
                    if args.alg == "binary"
                    else analytics.total_formula(args.alg, n)
                )
                rows.append(make_row(args.alg, n, "formula", total))
            _emit(rows, args.out)
        elif args.command == "fig1":
            spec = Fig1Spec(
                n_from=args.n_from,
                n_to=args.n_to,
                step=args.step,
                seed=args.seed,
                trials=args.trials,
                processes=args.processes,
            )
            _emit(run_fig1(spec), args.out)
        elif args.command == "fig2":
            _emit(run_fig2(args.n_to, args.step, args.variant, args.processes), args.out)
        elif args.command == "verify":
            report = run_verify(args.suite)
            json.dump(report, sys.stdout, indent=2)
            sys.stdout.write("\n")
            return 0 if report["ok"] else 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0
