"""Ground-truth engines for expected and worst-case comparison counts.

Four independent routes to the truth, in increasing reach:

  exhaustive_average / worst_case    run every permutation (small n)
  pair_enumeration_expectation       run the real merge code over every final
                                     rank pair of one round
  round_expectation_exact /          exact rational expectations assembled
  exact_sort_expectation             from the pivot schedule, the gap-cost
                                     census and the tail-average identity
  monte_carlo                        seeded sampling for everything larger

The block engine and the pair enumeration must agree bit-for-bit; that
agreement (tested across a wide grid) is what certifies the fast engine
against the shipped comparison code.  All reductions are exact integer or
rational sums, so chunked parallel runs are deterministic regardless of
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .combination import MERGE_INSERTION_WINDOW, choose_n_prime, combination_sort
from .core import (
    Expectation,
    Tally,
    ceil_lg,
    is_sorted_permutation,
    mix_seed,
    pow2_ratio,
    random_permutation,
)
from .merge_insertion import merge_insertion_sort
from .rhbs import rhbs_average
from .sorters import ONE_TWO, ONE_TWO_STAR, binary_insertion_sort, one_two_insertion, use_two_merge
from .two_merge import _merge_core, pivot_schedule

EXHAUSTIVE_CAP = 8
WORST_CASE_CAP = 10
PAIR_CAP = 4096
EXACT_CAP = 1 << 14


def _sort_binary(seq, tally):
    return binary_insertion_sort(seq, tally)


def _sort_one_two(seq, tally):
    return one_two_insertion(seq, tally, "plain")


def _sort_one_two_star(seq, tally):
    return one_two_insertion(seq, tally, "star")


def _sort_merge_insertion(seq, tally):
    return merge_insertion_sort(seq, tally)


def _sort_combination(seq, tally):
    return combination_sort(seq, tally, "auto")


ALGORITHMS = {
    "binary": _sort_binary,
    "one_two": _sort_one_two,
    "one_two_star": _sort_one_two_star,
    "merge_insertion": _sort_merge_insertion,
    "combination": _sort_combination,
}


def _algorithm(name: str):
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None


@dataclass(frozen=True)
class RoundExpectation:
    """Exact cost expectation of one paired-insertion round.

    mean includes the pair-ordering comparison; stop_distribution maps the
    walk's comparison count r to its exact probability.
    """

    i: int
    variant: str
    mean: Fraction
    stop_distribution: dict


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _exhaust_chunk(alg: str, n: int, firsts):
    sorter = _algorithm(alg)
    expected = list(range(1, n + 1))
    rest_pool = [k for k in expected]
    total = 0
    worst = 0
    for first in firsts:
        rest = [k for k in rest_pool if k != first]
        for tail in permutations(rest):
            tally = Tally()
            out = sorter((first, *tail), tally)
            if out != expected:
                raise AssertionError(f"{alg} failed to sort ({first}, {tail})")
            c = tally.count
            total += c
            if c > worst:
                worst = c
    return total, worst


_EXHAUST_CACHE: dict = {}


def _exhaustive_stats(alg: str, n: int, processes=None):
    key = (alg, n)
    hit = _EXHAUST_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 1:
        result = (0, 0)
    elif processes and processes > 1 and n >= 8:
        firsts = list(range(1, n + 1))
        shards = [firsts[k::processes] for k in range(processes)]
        with ProcessPoolExecutor(max_workers=processes) as pool:
            parts = list(pool.map(_exhaust_chunk, [alg] * len(shards), [n] * len(shards), shards))
        result = (sum(p[0] for p in parts), max(p[1] for p in parts))
    else:
        result = _exhaust_chunk(alg, n, range(1, n + 1))
    _EXHAUST_CACHE[key] = result
    return result


def exhaustive_average(alg: str, n: int, cap: int = EXHAUSTIVE_CAP, processes=None) -> Expectation:
    """Exact mean comparisons over all n! permutations (sortedness verified)."""
    if n < 1:
        raise ValueError(f"exhaustive_average needs n >= 1, got {n}")
    if n > cap:
        raise ValueError(f"exhaustive enumeration capped at n <= {cap}, got {n}")
    total, _ = _exhaustive_stats(alg, n, processes)
    return Expectation(Fraction(total, math.factorial(n)), "exact")


def worst_case(alg: str, n: int, cap: int = WORST_CASE_CAP, processes=None) -> int:
    """Maximum comparisons over all n! permutations."""
    if n < 1:
        raise ValueError(f"worst_case needs n >= 1, got {n}")
    if n > cap:
        raise ValueError(f"worst-case enumeration capped at n <= {cap}, got {n}")
    _, worst = _exhaustive_stats(alg, n, processes)
    return worst


# ---------------------------------------------------------------------------
# exact pair enumeration of one merge round


def _pair_chunk(variant: str, i: int, a_lo: int, a_hi: int):
    # Ranks are realised over the fixed sequence 3, 6, ..., 3(i-2): the key
    # 3a - 2 has final rank a and 3b - 4 final rank b for every a < b.
    schedule = pivot_schedule(i, variant)
    seq = [3 * k for k in range(1, i - 1)]
    tally = Tally()
    total = 0
    dist: dict = {}
    for a in range(a_lo, a_hi):
        key_a = 3 * a - 2
        for b in range(a + 1, i + 1):
            mark = tally.count
            _, _, pos_s, pos_l, walk, _, _ = _merge_core(key_a, 3 * b - 4, seq, schedule, tally)
            if pos_s != a - 1 or pos_l != b - 2:
                raise AssertionError(f"merge misplaced rank pair ({a}, {b}) at i={i}")
            total += tally.count - mark
            dist[walk] = dist.get(walk, 0) + 1
    return total, dist


def _pair_shards(i: int, parts: int):
    # Contiguous a-ranges with balanced pair counts (rank a carries i - a pairs).
    bounds = [1]
    done = 0
    target = i * (i - 1) // 2
    a = 1
    for part in range(1, parts):
        quota = target * part // parts
        while done < quota and a < i:
            done += i - a
            a += 1
        bounds.append(a)
    bounds.append(i)
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]


def pair_enumeration_expectation(
    variant: str, i: int, cap: int = PAIR_CAP, processes=None
) -> RoundExpectation:
    """Run the production merge over all C(i, 2) final rank pairs.

    Exact mean (pair ordering included) and the exact distribution of the
    walk's comparison count.
    """
    if i < 4 or i % 2:
        raise ValueError(f"pair enumeration needs an even i >= 4, got {i}")
    if i > cap:
        raise ValueError(f"pair enumeration capped at i <= {cap}, got {i}")
    if processes and processes > 1 and i >= 256:
        shards = _pair_shards(i, 4 * processes)
        with ProcessPoolExecutor(max_workers=processes) as pool:
            parts = list(
                pool.map(
                    _pair_chunk,
                    [variant] * len(shards),
                    [i] * len(shards),
                    [s[0] for s in shards],
                    [s[1] for s in shards],
                )
            )
    else:
        parts = [_pair_chunk(variant, i, 1, i)]
    total = sum(p[0] for p in parts)
    counts: dict = {}
    for _, dist in parts:
        for r, c in dist.items():
            counts[r] = counts.get(r, 0) + c
    pairs = i * (i - 1) // 2
    distribution = {r: Fraction(c, pairs) for r, c in sorted(counts.items())}
    return RoundExpectation(i, variant, Fraction(total, pairs), distribution)


# ---------------------------------------------------------------------------
# exact block engine


def walk_blocks(i: int, variant: str):
    """Gap blocks (r, lo, hi) induced by the pivot schedule.

    The smaller key stops after r walk comparisons iff its gap lies in
    [lo, hi); the final entry is the residual top block, which shares its r
    with the last pivot block.
    """
    schedule = pivot_schedule(i, variant)
    blocks = []
    prev = 0
    r = 0
    for piv in schedule.pivots:
        r += 1
        blocks.append((r, prev, piv))
        prev = piv
    blocks.append((r, prev, i - 1))
    return blocks


def _sum_t_ceil_lg(n: int) -> int:
    # sum of t * ceil(lg t) for t = 1..n
    s = 0
    d = 1
    while (1 << (d - 1)) < n:
        lo = (1 << (d - 1)) + 1
        hi = min(1 << d, n)
        s += d * (hi * (hi + 1) - (lo - 1) * lo) // 2
        d += 1
    return s


def _sum_pow2_ceil(n: int) -> int:
    # sum of 2^ceil(lg t) for t = 1..n
    s = 1 if n >= 1 else 0
    d = 1
    while (1 << (d - 1)) < n:
        lo = (1 << (d - 1)) + 1
        hi = min(1 << d, n)
        s += (hi - lo + 1) << d
        d += 1
    return s


def round_expectation_exact(variant: str, i: int) -> RoundExpectation:
    """Exact expectation of one merge round from the block structure.

    Gap probabilities are proportional to i - 1 - gap; within a block the
    search cost splits by the cheap-gap census, and the larger key's tail
    search averages to the closed-form gap mean.  Agrees bit-for-bit with
    pair_enumeration_expectation.
    """
    if i < 4 or i % 2:
        raise ValueError(f"round expectation needs an even i >= 4, got {i}")
    pairs = i * (i - 1) // 2
    weighted = 0
    counts: dict = {}
    for r, lo, hi in walk_blocks(i, variant):
        w = hi - lo
        if w <= 0:
            continue
        q = ceil_lg(w)
        cheap = (1 << q) - w
        w_all = w * (2 * i - lo - hi - 1) // 2
        w_cheap = cheap * (2 * (i - 1 - lo) - cheap + 1) // 2
        weighted += (r + q - 1) * w_cheap + (r + q) * (w_all - w_cheap)
        counts[r] = counts.get(r, 0) + w_all
    n_tail = i - 1
    weighted += _sum_t_ceil_lg(n_tail) + n_tail * (n_tail + 1) // 2 - _sum_pow2_ceil(n_tail)
    distribution = {r: Fraction(c, pairs) for r, c in sorted(counts.items())}
    return RoundExpectation(i, variant, 1 + Fraction(weighted, pairs), distribution)


# ---------------------------------------------------------------------------
# exact full-sort expectations


def _round_mean(variant: str, policy, i: int) -> Fraction:
    if use_two_merge(i, policy):
        return round_expectation_exact(variant, i).mean
    return rhbs_average(i - 1) + rhbs_average(i)


def exact_sort_expectation(
    alg: str,
    n: int,
    cap: int = EXACT_CAP,
    policy: str = "auto",
    prefix_trials: int = 4000,
    seed: int = 0,
    processes=None,
) -> Expectation:
    """Expected comparisons of a full sort, summed over exact round means.

    binary and the two paired-insertion sorters are fully exact rationals.
    merge_insertion has no round decomposition, so it is exact only up to the
    exhaustive cap.  The combination's insertion rounds are exact; its
    merge-insertion prefix is exhausted when small enough, otherwise estimated
    by a seeded Monte Carlo run of the stated size (the result is then tagged
    monte_carlo and carries the prefix's standard error).
    """
    if n > cap:
        raise ValueError(f"exact expectation capped at n <= {cap}, got {n}")
    if alg == "binary":
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        return Expectation(sum(rhbs_average(j) for j in range(1, n + 1)), "exact")
    if alg in ("one_two", "one_two_star"):
        if n < 2 or n % 2:
            raise ValueError(f"{alg} expectation needs an even n >= 2, got {n}")
        variant = "plain" if alg == "one_two" else "star"
        pol = ONE_TWO if alg == "one_two" else ONE_TWO_STAR
        mean = Fraction(1) + sum(_round_mean(variant, pol, i) for i in range(4, n + 1, 2))
        return Expectation(mean, "exact")
    if alg == "merge_insertion":
        if n > EXHAUSTIVE_CAP:
            raise ValueError(
                "merge_insertion has no round decomposition; "
                f"exact expectation is limited to n <= {EXHAUSTIVE_CAP} (use monte_carlo)"
            )
        return exhaustive_average(alg, n, processes=processes)
    if alg == "combination":
        if n < 2 or n % 2:
            raise ValueError(f"combination expectation needs an even n >= 2, got {n}")
        if policy not in ("auto", "combination", "merge_insertion"):
            raise ValueError(f"unknown policy {policy!r}")
        in_window = MERGE_INSERTION_WINDOW[0] <= pow2_ratio(n) <= MERGE_INSERTION_WINDOW[1]
        if policy == "merge_insertion" or (policy == "auto" and in_window):
            if n <= EXHAUSTIVE_CAP:
                return exhaustive_average("merge_insertion", n, processes=processes)
            return monte_carlo("merge_insertion", n, prefix_trials, seed, processes)
        n_prime = choose_n_prime(n).n_prime
        rounds = sum(_round_mean("star", ONE_TWO_STAR, i) for i in range(n_prime + 2, n + 1, 2))
        if n_prime <= EXHAUSTIVE_CAP:
            prefix = exhaustive_average("merge_insertion", n_prime, processes=processes)
            return Expectation(prefix.value + rounds, "exact")
        prefix = monte_carlo(
            "merge_insertion", n_prime, prefix_trials, mix_seed(seed, 104729), processes
        )
        return Expectation(prefix.value + float(rounds), "monte_carlo", prefix.error_band)
    raise ValueError(f"unknown algorithm {alg!r}")


# ---------------------------------------------------------------------------
# Monte Carlo


def _mc_chunk(alg: str, n: int, seed: int, t_lo: int, t_hi: int):
    sorter = _algorithm(alg)
    total = 0
    total_sq = 0
    for t in range(t_lo, t_hi):
        perm = random_permutation(n, mix_seed(seed, t))
        tally = Tally()
        out = sorter(perm, tally)
        if not is_sorted_permutation(perm, out):
            raise AssertionError(f"{alg} failed to sort trial {t} (seed {seed}, n={n})")
        total += tally.count
        total_sq += tally.count * tally.count
    return total, total_sq


def monte_carlo(alg: str, n: int, trials: int, seed: int, processes=None) -> Expectation:
    """Seeded sample mean of the comparison count with its standard error.

    Trial t draws the permutation seeded by mix_seed(seed, t), so the result
    is identical however the trials are chunked across processes.
    """
    if trials < 1:
        raise ValueError(f"monte_carlo needs trials >= 1, got {trials}")
    if processes and processes > 1 and trials >= 64:
        step = -(-trials // (4 * processes))
        spans = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=processes) as pool:
            parts = list(
                pool.map(
                    _mc_chunk,
                    [alg] * len(spans),
                    [n] * len(spans),
                    [seed] * len(spans),
                    [s[0] for s in spans],
                    [s[1] for s in spans],
                )
            )
        total = sum(p[0] for p in parts)
        total_sq = sum(p[1] for p in parts)
    else:
        total, total_sq = _mc_chunk(alg, n, seed, 0, trials)
    mean = total / trials
    if trials > 1:
        var = (total_sq - trials * mean * mean) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = float("inf")
    return Expectation(mean, "monte_carlo", stderr)


# ---------------------------------------------------------------------------
# randomized sortedness scanning


def _sorted_chunk(alg: str, n: int, seed: int, t_lo: int, t_hi: int):
    sorter = _algorithm(alg)
    failures = 0
    for t in range(t_lo, t_hi):
        perm = random_permutation(n, mix_seed(seed, t))
        tally = Tally()
        if not is_sorted_permutation(perm, sorter(perm, tally)):
            failures += 1
    return failures


def sortedness_scan(alg: str, n: int, trials: int, seed: int, processes=None) -> int:
    """Number of seeded trials (out of `trials`) the algorithm fails to sort."""
    if trials < 1:
        raise ValueError(f"sortedness_scan needs trials >= 1, got {trials}")
    if processes and processes > 1 and trials >= 64:
        step = -(-trials // (4 * processes))
        spans = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=processes) as pool:
            parts = list(
                pool.map(
                    _sorted_chunk,
                    [alg] * len(spans),
                    [n] * len(spans),
                    [seed] * len(spans),
                    [s[0] for s in spans],
                    [s[1] for s in spans],
                )
            )
        return sum(parts)
    return _sorted_chunk(alg, n, seed, 0, trials)
