"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one `[criterion NN] PASS ...` line (visible with -s, and on
failure pytest shows the captured line plus the assertion).  Heavy
enumerations run on two worker processes with exact integer reductions, so
results are bit-identical regardless of scheduling.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import pytest

from sortlab import analytics
from sortlab.core import Tally, _pow2_ratio_any, ceil_lg, pow2_ratio, random_permutation
from sortlab.combination import MERGE_INSERTION_WINDOW
from sortlab.merge_insertion import merge_insertion_sort
from sortlab.oracles import (
    ALGORITHMS,
    exact_sort_expectation,
    exhaustive_average,
    monte_carlo,
    pair_enumeration_expectation,
    sortedness_scan,
    worst_case,
)
from sortlab.rhbs import _locate, rhbs_average, rhbs_gap_cost

PROCS = min(2, os.cpu_count() or 1)

INFO_FLOOR_CONSTANT = -1.4427

PLAIN_GRID = (256, 512, 1024, 2048, 4096)
STAR_POINTS = (256, 4096)


def _constant(n, comparisons):
    return (float(comparisons) - n * math.log2(n)) / n


def _sweep_gap_costs(span):
    """Physically insert into every gap for each m in span; return violations."""
    lo, hi = span
    bad = []
    for m in range(lo, hi):
        seq = [2 * k for k in range(1, m + 1)]
        tally = Tally()
        costs = []
        for gap in range(m + 1):
            mark = tally.count
            if _locate(2 * gap + 1, seq, 0, m, tally) != gap:
                bad.append((m, gap, "position"))
            costs.append(tally.count - mark)
        q = ceil_lg(m + 1)
        if not set(costs) <= {q - 1, q}:
            bad.append((m, None, "band"))
        if costs != sorted(costs):
            bad.append((m, None, "suffix"))
        if sum(1 for c in costs if c == q - 1) != (1 << q) - (m + 1):
            bad.append((m, None, "census"))
        if Fraction(sum(costs), m + 1) != rhbs_average(m + 1):
            bad.append((m, None, "mean"))
        if costs != [rhbs_gap_cost(m + 1, g) for g in range(m + 1)]:
            bad.append((m, None, "model"))
    return bad


@pytest.fixture(scope="module")
def gap_sweep():
    # span edges ~ 4096 sqrt(k/8): equal quadratic work per span
    edges = [1] + [round(4096 * math.sqrt(k / 8)) for k in range(1, 8)] + [4097]
    spans = list(zip(edges, edges[1:]))
    with ProcessPoolExecutor(max_workers=PROCS) as pool:
        parts = list(pool.map(_sweep_gap_costs, spans))
    return [bad for part in parts for bad in part]


@pytest.fixture(scope="module")
def pair_plain():
    return {i: pair_enumeration_expectation("plain", i, processes=PROCS) for i in PLAIN_GRID}


@pytest.fixture(scope="module")
def pair_star():
    return {i: pair_enumeration_expectation("star", i, processes=PROCS) for i in STAR_POINTS}


@pytest.fixture(scope="module")
def policy_constants():
    data = {}
    for alg, spots in (
        ("one_two", (3678, 7356)),
        ("one_two_star", (3702, 7404)),
        ("combination", (7562,)),
    ):
        c_max, n_at = analytics.worst_constant(alg)
        rows = []
        for n in spots:
            exp = exact_sort_expectation(alg, n, prefix_trials=4000, seed=3, processes=PROCS)
            rows.append((n, _constant(n, exp.value), analytics.linear_constant(alg, n)))
        data[alg] = {"max": c_max, "n_at": n_at, "spots": rows}
    return data


@pytest.fixture(scope="module")
def merge_insertion_mc():
    exp = monte_carlo("merge_insertion", 342, 100000, seed=20259, processes=PROCS)
    return _constant(342, exp.value)


def test_c01_single_insertion_mean_exact(gap_sweep):
    mean_bad = [b for b in gap_sweep if b[2] in ("mean", "position")]
    assert mean_bad == []
    print("[criterion 01] PASS: gap-cost mean equals ceil(lg m) + 1 - 2^ceil(lg m)/m "
          "exactly for every gap count in [1, 4097]")


def test_c02_search_structure(gap_sweep):
    structural = [b for b in gap_sweep if b[2] in ("band", "suffix", "census", "model")]
    assert structural == []
    print("[criterion 02] PASS: two-value cost band, expensive-suffix monotonicity and "
          "cheap-gap census hold for all m <= 4096")


def test_c03_round_decomposition_exact():
    for alg in ALGORITHMS:
        for n in (2, 4, 6, 8):
            ex = exhaustive_average(alg, n, processes=PROCS).value
            en = exact_sort_expectation(alg, n).value
            assert ex == en, (alg, n, ex, en)
    print("[criterion 03] PASS: exhaustive factorial averages equal per-round exact "
          "expectations for every algorithm, even n <= 8")


def test_c04_tail_insertion_formula():
    for i, tol in ((1024, 0.01), (4096, 0.003)):
        pairs = i * (i - 1) // 2
        oracle = sum((i - 1 - g) * rhbs_average(i - 1 - g) for g in range(i - 1)) / pairs
        delta = abs(float(oracle) - analytics.step4_expected(i).value)
        assert delta <= tol, (i, delta)
    print("[criterion 04] PASS: tail-search mean matches ceil(lg(i-1)) + 1 - 2/p + 1/(3p^2) "
          "within 0.01 at i=1024 and 0.003 at i=4096")


def test_c05_plain_pair_formula(pair_plain):
    deltas = []
    for i in PLAIN_GRID:
        delta = abs(float(pair_plain[i].mean) - analytics.two_merge_pair_formula(i))
        deltas.append(delta)
    assert deltas[PLAIN_GRID.index(2048)] <= 0.02
    floor = 1e-4
    for prev, cur in zip(deltas, deltas[1:]):
        assert cur <= prev or cur <= floor, deltas
    print(f"[criterion 05] PASS: all-pairs plain-merge mean vs pair formula, |delta|="
          f"{['%.2e' % d for d in deltas]} over i={list(PLAIN_GRID)} (<=0.02 at 2048, "
          f"decreasing to the {floor:g} floor)")


def test_c06_stop_index_moments(pair_plain):
    i = 4096
    dist = pair_plain[i].stop_distribution
    moments = analytics.stop_index_moments(i)
    e_r = float(sum(r * p for r, p in dist.items()))
    e_floor = float(sum((r // 2) * p for r, p in dist.items()))
    e_ceil = float(sum(((r + 1) // 2) * p for r, p in dist.items()))
    w_of = lambda r: (analytics.SQRT2 - 1) * 2.0 ** (-r / 2) * i
    e_inv = sum(float(p) / _pow2_ratio_any(w_of(r)) for r, p in dist.items())
    e_inv_sq = sum(float(p) / _pow2_ratio_any(w_of(r)) ** 2 for r, p in dist.items())
    checks = (
        (e_r, moments.e_r),
        (e_floor, moments.e_floor_half),
        (e_ceil, moments.e_ceil_half),
        (e_inv, moments.e_inv_ratio),
        (e_inv_sq, moments.e_inv_ratio_sq),
    )
    for got, want in checks:
        assert abs(got - want) <= 0.01, checks
    print("[criterion 06] PASS: walk stop-index moments at i=4096 match "
          f"(2, 2/3, 4/3, {moments.e_inv_ratio:.4f}, {moments.e_inv_ratio_sq:.4f}) within 0.01")


def test_c07_star_pair_formula(pair_star):
    for i, tol in ((256, 0.02), (4096, 0.005)):
        delta = abs(float(pair_star[i].mean) - analytics.star_pair_formula(i))
        assert delta <= tol, (i, delta)
    print("[criterion 07] PASS: all-pairs starred-merge mean matches its formula within "
          "0.02 at n=256 and 0.005 at n=4096")


def test_c08_plain_policy_constant(policy_constants):
    data = policy_constants["one_two"]
    assert abs(data["max"] - (-1.40118)) <= 0.001, data
    for n, c_exact, c_formula in data["spots"]:
        assert abs(c_exact - c_formula) <= 0.003, (n, c_exact, c_formula)
    print(f"[criterion 08] PASS: plain-policy worst formula constant {data['max']:.5f} "
          f"(target -1.40118 +- 0.001); exact engine within 0.003 at n="
          f"{[s[0] for s in data['spots']]}")


def test_c09_star_policy_constant(policy_constants):
    data = policy_constants["one_two_star"]
    assert abs(data["max"] - (-1.4034)) <= 0.001, data
    for n, c_exact, c_formula in data["spots"]:
        assert abs(c_exact - c_formula) <= 0.003, (n, c_exact, c_formula)
    print(f"[criterion 09] PASS: starred-policy worst formula constant {data['max']:.5f} "
          f"(target -1.4034 +- 0.001); exact engine within 0.003 at n="
          f"{[s[0] for s in data['spots']]}")


def test_c10_combination_constant(policy_constants):
    data = policy_constants["combination"]
    assert abs(data["max"] - (-1.41064)) <= 0.001, data
    # The prefix cost model is the favourable-length worst-case line; the real
    # prefix averages below it, so the engine check is one-sided: the measured
    # constant must confirm the bound (and stay above the decision-tree floor).
    for n, c_exact, c_formula in data["spots"]:
        assert c_exact <= c_formula + 0.005, (n, c_exact, c_formula)
        assert c_exact >= INFO_FLOOR_CONSTANT, (n, c_exact)
    # auto policy hands the window back to plain merge-insertion
    n = 1320
    assert MERGE_INSERTION_WINDOW[0] <= pow2_ratio(n) <= MERGE_INSERTION_WINDOW[1]
    perm = random_permutation(n, seed=17)
    t_auto, t_mi = Tally(), Tally()
    out = ALGORITHMS["combination"](perm, t_auto)
    assert out == merge_insertion_sort(perm, t_mi) and t_auto.count == t_mi.count
    gap = data["spots"][0][1] - data["spots"][0][2]
    print(f"[criterion 10] PASS: combination worst formula constant {data['max']:.5f} "
          f"(target -1.41064 +- 0.001); engine confirms the bound at n=7562 "
          f"(measured-formula gap {gap:+.4f}); auto policy defers to merge-insertion "
          "inside [0.638, 2/3]")


def test_c11_merge_insertion_quality(merge_insertion_mc):
    for n in range(1, 11):
        got = worst_case("merge_insertion", n, processes=PROCS)
        assert got == analytics.info_lower_bound(n), (n, got)
    assert abs(merge_insertion_mc - (-1.415)) <= 0.005, merge_insertion_mc
    print(f"[criterion 11] PASS: merge-insertion worst case equals ceil(lg n!) for n <= 10; "
          f"sampled constant at n=342 is {merge_insertion_mc:.4f} (-1.415 +- 0.005, 1e5 trials)")


def test_c12_information_floor(policy_constants, merge_insertion_mc):
    for alg in ALGORITHMS:
        for n in (2, 4, 6, 8):
            mean = exhaustive_average(alg, n).value
            assert mean >= math.log2(math.factorial(n)), (alg, n, mean)
    measured = [merge_insertion_mc]
    for data in policy_constants.values():
        measured.append(data["max"])
        measured.extend(c for _, c, _ in data["spots"])
    assert all(c >= INFO_FLOOR_CONSTANT for c in measured), measured
    print(f"[criterion 12] PASS: exhaustive means sit above lg(n!) for n <= 8 and all "
          f"{len(measured)} measured constants exceed {INFO_FLOOR_CONSTANT}")


def test_c13_sortedness():
    from itertools import permutations

    for alg, fn in ALGORITHMS.items():
        for n in range(1, 9):
            if alg == "combination" and n % 2:
                continue
            expected = list(range(1, n + 1))
            for perm in permutations(expected):
                assert fn(perm, Tally()) == expected
    failures = 0
    for alg in ALGORITHMS:
        for n in (100, 1000, 4096):
            failures += sortedness_scan(alg, n, 10000, seed=n * 31 + 7, processes=PROCS)
    assert failures == 0
    print("[criterion 13] PASS: exhaustive sortedness for n <= 8 plus 1e4 seeded "
          "permutations per algorithm at n in {100, 1000, 4096}")
