"""Merge-insertion on a favourable prefix, paired insertions for the rest.

Merge-insertion is at its best when the input length is ``ceil(2^k / 3)`` and
noticeably worse elsewhere.  The combined sorter therefore picks the largest
such value n' <= n, sorts that prefix by merge-insertion, and brings in the
remaining keys two per round exactly like the starred one-two insertion.  n'
is decremented by one when n - n' is odd so the rounds stay even-length.

Where the deviation ratio of n lies in [0.638, 2/3] plain merge-insertion
still wins; the default "auto" policy dispatches the whole input to it there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Tally, pow2_ratio
from .merge_insertion import merge_insertion_sort
from .rhbs import _locate
from .sorters import ONE_TWO_STAR, use_two_merge
from .two_merge import _merge_core, pivot_schedule

MERGE_INSERTION_WINDOW = (0.638, 2 / 3)

POLICIES = ("auto", "combination", "merge_insertion")


@dataclass(frozen=True)
class PrefixChoice:
    """Chosen merge-insertion prefix length for an even input length."""

    n: int
    n_prime: int
    parity_adjusted: bool


def choose_n_prime(n: int) -> PrefixChoice:
    """Largest ``ceil(2^k / 3) <= n``, decremented once if n - n' is odd."""
    if n % 2:
        raise ValueError(f"choose_n_prime needs an even n, got {n}")
    if n < 2:
        raise ValueError(f"choose_n_prime needs n >= 2, got {n}")
    best = 2
    k = 2
    while True:
        cand = ((1 << k) + 2) // 3  # == ceil(2^k / 3)
        if cand > n:
            break
        best = cand
        k += 1
    adjusted = (n - best) % 2 == 1
    if adjusted:
        best -= 1
    return PrefixChoice(n=n, n_prime=best, parity_adjusted=adjusted)


def combination_sort(seq, tally: Tally, policy: str = "auto") -> list:
    """Sort an even number of distinct keys via the prefix-plus-rounds scheme.

    policy "combination" always runs the prefix scheme, "merge_insertion"
    always runs plain merge-insertion, and "auto" (default) runs plain
    merge-insertion exactly when the deviation ratio of n falls in
    [0.638, 2/3].
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    keys = list(seq)
    n = len(keys)
    if n % 2:
        raise ValueError(f"combination_sort needs an even length, got {n}")
    if n == 0:
        return keys
    if n <= 2 or policy == "merge_insertion":
        return merge_insertion_sort(keys, tally)
    if policy == "auto":
        lo, hi = MERGE_INSERTION_WINDOW
        if lo <= pow2_ratio(n) <= hi:
            return merge_insertion_sort(keys, tally)
    n_prime = choose_n_prime(n).n_prime
    out = merge_insertion_sort(keys[:n_prime], tally)
    for i in range(n_prime + 2, n + 1, 2):
        x, y = keys[i - 2], keys[i - 1]
        if use_two_merge(i, ONE_TWO_STAR):
            schedule = pivot_schedule(i, "star")
            small, large, pos_small, pos_large, *_ = _merge_core(x, y, out, schedule, tally)
            out.insert(pos_small, small)
            out.insert(pos_large + 1, large)
        else:
            out.insert(_locate(x, out, 0, len(out), tally), x)
            out.insert(_locate(y, out, 0, len(out), tally), y)
    return out
