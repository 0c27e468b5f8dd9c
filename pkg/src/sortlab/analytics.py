"""Closed-form average-comparison formulas and the linear-term constants.

Everything here evaluates cost *models*; no keys are compared.  The central
objects are the per-step extra-cost curves over the power-of-two deviation
ratio p in (1/2, 1]:

  per_step_extra_plain(p)  extra over ceil(lg i) for one insertion when pairs
                           are merged inside the window [0.5511, 0.888]
  per_step_extra_star(p)   same for the deviation-aware merge and its window

plus the building blocks they are assembled from (block costs of the pivot
walk, the tail-insertion average, the stop-index moments) and the totals

  total_formula(alg, n)    per-round sum of the formula costs
  linear_constant(alg, n)  (total - n lg n) / n

whose worst value over the deviation ratio is the figure of merit for each
algorithm.  Sums are taken round by round; the integral shortcut is available
separately as sum_via_integral and is tested as an approximation, never used
in the totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combination import MERGE_INSERTION_WINDOW, choose_n_prime
from .core import Expectation, _pow2_ratio_any, ceil_lg, ceil_lg_real, pow2_ratio
from .sorters import ONE_TWO, ONE_TWO_STAR

SQRT2 = math.sqrt(2)
LG3 = math.log2(3)

# Branch edges of the plain-merge cost curves.
BREAK_MID_LO = (1 + SQRT2) / 4
BREAK_MID_HI = (2 + SQRT2) / 4

PLAIN_WINDOW = ONE_TWO.window
STAR_WINDOW = ONE_TWO_STAR.window

BREAKPOINTS_PLAIN = (PLAIN_WINDOW[0], BREAK_MID_LO, BREAK_MID_HI, PLAIN_WINDOW[1])
BREAKPOINTS_STAR = (STAR_WINDOW[0], 0.75, STAR_WINDOW[1])

FORMULA_ALGORITHMS = ("one_two", "one_two_star", "combination")


def _check_ratio(p: float):
    if not 0.5 < p <= 1.0:
        raise ValueError(f"deviation ratio must lie in (1/2, 1], got {p}")


def _check_even(i: int):
    if i < 4 or i % 2:
        raise ValueError(f"need an even length >= 4, got {i}")


def binary_slack(i: int) -> Fraction:
    """Fractional part of the average binary-insertion cost: 1 - 2^ceil(lg i)/i."""
    if i < 1:
        raise ValueError(f"binary_slack needs i >= 1, got {i}")
    return 1 - Fraction(1 << ceil_lg(i), i)


def binary_sort_formula(n: int) -> float:
    """Closed-form total for the binary insertion sort.

    n lg n + (1 - lg p - (1 + ln(4 p)) / p) n with p the deviation ratio of n;
    the parenthesised coefficient stays below -1.386.
    """
    if n < 2:
        raise ValueError(f"binary_sort_formula needs n >= 2, got {n}")
    p = pow2_ratio(n)
    return n * math.log2(n) + (1 - math.log2(p) - (1 + math.log(4 * p)) / p) * n


def pivot_block_cost(i: int, r: int) -> Expectation:
    """Average block-search cost for the smaller key given the walk stops at r.

    Uses the idealised block width w = (sqrt(2) - 1) 2^(-r/2) i; the error
    band scales like 2^(r/2) / i.
    """
    _check_even(i)
    if r < 1:
        raise ValueError(f"stop index must be >= 1, got {r}")
    w = (SQRT2 - 1) * 2.0 ** (-r / 2) * i
    pr = _pow2_ratio_any(w)
    value = ceil_lg_real(w) + 7 - 4 * SQRT2 - (10 - 6 * SQRT2) / pr + (3 - 2 * SQRT2) / (pr * pr)
    return Expectation(value, "formula", error_band=2.0 ** (r / 2) / i)


def _step3_extra_ratio(p: float) -> float:
    base = 5 - 4 * SQRT2 - 1 / p + 1 / (6 * p * p)
    if p <= BREAK_MID_LO:
        return base - 1 / (6 * p) - 1 / (16 * p * p) - 2 / 3
    if p <= BREAK_MID_HI:
        return base - SQRT2 / (3 * p) - 1 / 3
    return base - 4 / (3 * p) + 1 / (4 * p * p) + 1 / 3


def step3_extra(i: int) -> float:
    """Expected block-search cost for the smaller key, minus ceil(lg i)."""
    _check_even(i)
    return _step3_extra_ratio(pow2_ratio(i))


def _pair_extra_ratio(p: float, p_prev: float) -> float:
    return 1 + _step3_extra_ratio(p) - 2 / p_prev + 1 / (3 * p_prev * p_prev)


def pair_extra(i: int) -> float:
    """Sum of both search extras for one plain merge (walk and pair costs excluded)."""
    _check_even(i)
    p_prev = (i - 1) / (1 << ceil_lg(i - 1))
    return _pair_extra_ratio(pow2_ratio(i), p_prev)


def two_merge_pair_formula(i: int) -> float:
    """Expected total cost of one plain merge, ordering and walk included.

    ceil(lg i) + ceil(lg(i-1)) + pair_extra(i) + 3, the +3 covering the pair
    ordering and the two expected walk probes.
    """
    _check_even(i)
    return ceil_lg(i) + ceil_lg(i - 1) + pair_extra(i) + 3


def step4_expected(i: int) -> Expectation:
    """Expected tail-search cost for the larger key of a merged pair."""
    _check_even(i)
    p = pow2_ratio(i)
    value = ceil_lg(i - 1) + 1 - 2 / p + 1 / (3 * p * p)
    return Expectation(value, "formula", error_band=1.0 / i)


def per_step_extra_plain(p: float) -> float:
    """Per-insertion extra over ceil(lg i) under the plain window policy.

    Equals the binary-insertion slack 1 - 1/p outside [0.5511, 0.888] and the
    three-branch merge curve inside.
    """
    _check_ratio(p)
    if p <= PLAIN_WINDOW[0]:
        return 1 - 1 / p
    if p <= BREAK_MID_LO:
        return 25 / 6 - 2 * SQRT2 - 19 / (12 * p) + 7 / (32 * p * p)
    if p <= BREAK_MID_HI:
        return 13 / 3 - 2 * SQRT2 - (9 + SQRT2) / (6 * p) + 1 / (4 * p * p)
    if p <= PLAIN_WINDOW[1]:
        return 14 / 3 - 2 * SQRT2 - 13 / (6 * p) + 3 / (8 * p * p)
    return 1 - 1 / p


def per_step_extra_star(p: float) -> float:
    """Per-insertion extra under the starred window policy.

    The in-window branches meet 1 - 1/p exactly at the window edges
    3/4 - sqrt(6)/12 and 3/4 + sqrt(3)/12.
    """
    _check_ratio(p)
    if p <= STAR_WINDOW[0]:
        return 1 - 1 / p
    if p <= 0.75:
        return 1.5 - 7 / (4 * p) + 25 / (96 * p * p)
    if p <= STAR_WINDOW[1]:
        return 2 - 5 / (2 * p) + 13 / (24 * p * p)
    return 1 - 1 / p


def star_steps23_expected(i: int) -> float:
    """Expected walk plus block-search cost of the starred merge's smaller key."""
    _check_even(i)
    p = pow2_ratio(i)
    if p <= 0.75:
        return ceil_lg(i) + 1 - 3 / (2 * p) + 3 / (16 * p * p)
    return ceil_lg(i) + 2 - 3 / p + 3 / (4 * p * p)


def per_step_two_merge_star(i: int) -> float:
    """Expected per-insertion cost of the starred merge (half the pair cost)."""
    _check_even(i)
    p = pow2_ratio(i)
    slack = 1 - 1 / p
    if p <= 0.75:
        extra = 0.5 - 3 / (4 * p) + 25 / (96 * p * p)
    else:
        extra = 1 - 3 / (2 * p) + 13 / (24 * p * p)
    return ceil_lg(i) + slack + extra


def star_pair_formula(i: int) -> float:
    """Expected total cost of one starred merge, ordering and walk included."""
    return 2 * per_step_two_merge_star(i)


@dataclass(frozen=True)
class StopMoments:
    """Formula-side moments of the pivot-walk stop index (error band ~ 1/i)."""

    e_r: float
    e_floor_half: float
    e_ceil_half: float
    e_inv_ratio: float
    e_inv_ratio_sq: float
    error_band: float


def stop_index_moments(i: int) -> StopMoments:
    """Moments of the plain walk's stop index r: E[r], E[floor(r/2)],
    E[ceil(r/2)], and the two inverse-ratio moments of the stop block."""
    _check_even(i)
    p = pow2_ratio(i)
    if p <= BREAK_MID_LO:
        inv = (3 * SQRT2 + 5) / (12 * p)
        inv_sq = 5 * (3 + 2 * SQRT2) / (48 * p * p)
    elif p <= BREAK_MID_HI:
        inv = (3 + 2 * SQRT2) / (6 * p)
        inv_sq = (3 + 2 * SQRT2) / (6 * p * p)
    else:
        inv = (3 * SQRT2 + 5) / (6 * p)
        inv_sq = 5 * (3 + 2 * SQRT2) / (12 * p * p)
    return StopMoments(2.0, 2 / 3, 4 / 3, inv, inv_sq, 1.0 / i)


def _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    return _adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + _adaptive_simpson(
        f, m, b, fm, frm, fb, right, tol / 2, depth - 1
    )


def piecewise_integral(f, a: float, b: float, breakpoints=(), tol: float = 1e-12) -> float:
    """Integrate f over [a, b], splitting panels at the given breakpoints.

    Adaptive Simpson per panel; tol is the absolute target per panel.
    """
    if b < a:
        raise ValueError("integration needs a <= b")
    if a == b:
        return 0.0
    edges = sorted({a, b, *(x for x in breakpoints if a < x < b)})
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        fa, fb = f(lo), f(hi)
        fm = f(0.5 * (lo + hi))
        whole = (hi - lo) / 6 * (fa + 4 * fm + fb)
        total += _adaptive_simpson(f, lo, hi, fa, fm, fb, whole, tol, 48)
    return total


def sum_via_integral(f, n: int, breakpoints=()) -> float:
    """Integral approximation of the sum of f over the deviation ratios of 1..n.

    2^ceil(lg n) (integral of f over (1/2, 1] plus over (1/2, p_n]); accurate
    to O(log n) for piecewise-smooth f.
    """
    if n < 1:
        raise ValueError(f"sum_via_integral needs n >= 1, got {n}")
    p_n = pow2_ratio(n)
    scale = 1 << ceil_lg(n)
    lo = 0.5 + 1e-12  # the ratio domain is the half-open (1/2, 1]
    return scale * (
        piecewise_integral(f, lo, 1.0, breakpoints) + piecewise_integral(f, lo, p_n, breakpoints)
    )


def _round_extra(alg: str):
    if alg == "one_two":
        return per_step_extra_plain
    if alg in ("one_two_star", "combination"):
        return per_step_extra_star
    raise ValueError(f"no formula curve for algorithm {alg!r}")


def round_cost_formula(alg: str, i: int) -> float:
    """Formula cost of the round that grows the sorted prefix to length i."""
    if i == 2:
        return 1.0
    _check_even(i)
    extra = _round_extra(alg)
    return ceil_lg(i) + ceil_lg(i - 1) + 2 * extra(pow2_ratio(i))


def merge_insertion_prefix_formula(n_prime: int) -> float:
    """Best-case merge-insertion total: n' lg n' - (3 - lg 3) n'."""
    if n_prime < 2:
        raise ValueError(f"prefix length must be >= 2, got {n_prime}")
    return n_prime * math.log2(n_prime) - (3 - LG3) * n_prime


def total_formula(alg: str, n: int) -> float:
    """Per-round formula total for sorting n keys with the given algorithm."""
    if n < 2 or n % 2:
        raise ValueError(f"total_formula needs an even n >= 2, got {n}")
    if alg in ("one_two", "one_two_star"):
        return sum(round_cost_formula(alg, i) for i in range(2, n + 1, 2))
    if alg == "combination":
        n_prime = choose_n_prime(n).n_prime
        rounds = sum(round_cost_formula(alg, i) for i in range(n_prime + 2, n + 1, 2))
        return merge_insertion_prefix_formula(n_prime) + rounds
    raise ValueError(f"no formula total for algorithm {alg!r}")


def linear_constant(alg: str, n: int) -> float:
    """Linear-term constant of the formula total: (total - n lg n) / n."""
    return (total_formula(alg, n) - n * math.log2(n)) / n


def _extra_plain_vec(p):
    return np.select(
        [
            p <= PLAIN_WINDOW[0],
            p <= BREAK_MID_LO,
            p <= BREAK_MID_HI,
            p <= PLAIN_WINDOW[1],
        ],
        [
            1 - 1 / p,
            25 / 6 - 2 * SQRT2 - 19 / (12 * p) + 7 / (32 * p * p),
            13 / 3 - 2 * SQRT2 - (9 + SQRT2) / (6 * p) + 1 / (4 * p * p),
            14 / 3 - 2 * SQRT2 - 13 / (6 * p) + 3 / (8 * p * p),
        ],
        default=1 - 1 / p,
    )


def _extra_star_vec(p):
    return np.select(
        [p <= STAR_WINDOW[0], p <= 0.75, p <= STAR_WINDOW[1]],
        [
            1 - 1 / p,
            1.5 - 7 / (4 * p) + 25 / (96 * p * p),
            2 - 5 / (2 * p) + 13 / (24 * p * p),
        ],
        default=1 - 1 / p,
    )


def _round_term_cumsum(alg: str, n_hi: int):
    # Cumulative formula cost over even prefix lengths 2, 4, ..., n_hi;
    # entry k holds the total through length 2 (k + 1).
    i = np.arange(2, n_hi + 1, 2, dtype=np.float64)
    bits = np.ceil(np.log2(i))
    bits_prev = np.ceil(np.log2(i - 1))
    bits_prev[0] = 0.0  # lg 1
    p = i / np.exp2(bits)
    extra = _extra_plain_vec(p) if alg == "one_two" else _extra_star_vec(p)
    return np.cumsum(bits + bits_prev + 2 * extra)


def constant_curve(alg: str, n_hi: int = 1 << 20, honor_policy: bool = True):
    """Formula constants for every even n in the top octave below n_hi.

    Returns (n values, constants) as numpy arrays.  For the combination the
    prefix term is included; with honor_policy the lengths whose deviation
    ratio falls in the plain merge-insertion window are dropped, matching the
    auto dispatch (the formula does not model merge-insertion there).
    """
    if alg not in FORMULA_ALGORITHMS:
        raise ValueError(f"no formula curve for algorithm {alg!r}")
    if n_hi < 8 or n_hi & (n_hi - 1):
        raise ValueError(f"n_hi must be a power of two >= 8, got {n_hi}")
    cum = _round_term_cumsum(alg, n_hi)
    ns = np.arange(n_hi // 2 + 2, n_hi + 1, 2, dtype=np.int64)
    totals = cum[ns // 2 - 1]
    if alg == "combination":
        cands = np.array([((1 << k) + 2) // 3 for k in range(2, n_hi.bit_length() + 2)])
        raw = cands[np.searchsorted(cands, ns, side="right") - 1]
        n_prime = raw - ((ns - raw) & 1)
        prefix = n_prime * np.log2(n_prime) - (3 - LG3) * n_prime
        totals = prefix + (cum[ns // 2 - 1] - cum[n_prime // 2 - 1])
    nf = ns.astype(np.float64)
    constants = (totals - nf * np.log2(nf)) / nf
    if alg == "combination" and honor_policy:
        ratio = nf / np.exp2(np.ceil(np.log2(nf)))
        keep = ~((ratio >= MERGE_INSERTION_WINDOW[0]) & (ratio <= MERGE_INSERTION_WINDOW[1]))
        ns, constants = ns[keep], constants[keep]
    return ns, constants


def worst_constant(alg: str, n_hi: int = 1 << 20, honor_policy: bool = True):
    """Worst (largest) formula constant over the top octave and its length."""
    ns, constants = constant_curve(alg, n_hi, honor_policy)
    k = int(np.argmax(constants))
    return float(constants[k]), int(ns[k])


def info_lower_bound(n: int) -> int:
    """Exact ceil(lg n!), the decision-tree floor on worst-case comparisons."""
    if n < 1:
        raise ValueError(f"info_lower_bound needs n >= 1, got {n}")
    f = math.factorial(n)
    bits = f.bit_length()
    return bits - 1 if f == 1 << (bits - 1) else bits
