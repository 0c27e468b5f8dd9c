"""Two-element merge into a sorted sequence.

Merging an ordered pair A < B into a sorted sequence of length i - 2 runs in
four steps: one comparison orders the pair; a geometric pivot walk brackets A
between two pivots; a right-heavy search places A inside that block; a second
right-heavy search places B among the elements above A.  The pivot walk probes
positions ``ceil(alpha(r) * i)`` where the plain schedule uses
``alpha(r) = 1 - 2^(-r/2)`` and the starred schedule bends the odd-r fractions
by the power-of-two deviation of i so that the first (likeliest) block has a
power-of-two gap count.

Raw pivot indices are clamped to the last element and de-duplicated, so the
walk is well defined for every even i >= 4; if the walk exhausts the schedule
the key is placed in the residual top block.  All pivot indices are computed
in exact integer arithmetic (``isqrt`` for the sqrt(2) fractions); the float
``pivot_fraction`` functions exist for analysis and are cross-checked against
the integer path in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .core import Tally, ceil_lg, counting_compare
from .rhbs import _locate


def pivot_fraction(r: int) -> float:
    """Plain pivot fraction ``1 - 2^(-r/2)`` for walk step r >= 1."""
    if r < 1:
        raise ValueError(f"pivot step must be >= 1, got {r}")
    return 1.0 - 2.0 ** (-r / 2)


def pivot_fraction_star(r: int, ratio: float) -> float:
    """Deviation-aware pivot fraction for the starred walk.

    Even steps match the plain fraction.  Odd steps r = 2k-1 use
    ``1 - 2^(1-k) + 2^(-(k+1)) / ratio`` when ratio > 3/4 and
    ``1 - 2^(-k) - 2^(-(k+2)) / ratio`` otherwise, where ratio is the
    power-of-two deviation of the target length i.
    """
    if r < 1:
        raise ValueError(f"pivot step must be >= 1, got {r}")
    if not 0.5 < ratio <= 1.0:
        raise ValueError(f"ratio must lie in (1/2, 1], got {ratio}")
    if r % 2 == 0:
        return 1.0 - 2.0 ** (-(r // 2))
    k = (r + 1) // 2
    if ratio > 0.75:
        return 1.0 - 2.0 ** (1 - k) + 2.0 ** (-(k + 1)) / ratio
    return 1.0 - 2.0 ** (-k) - 2.0 ** (-(k + 2)) / ratio


@dataclass(frozen=True)
class PivotSchedule:
    """Clamped, strictly increasing pivot indices for one merge target length."""

    i: int
    variant: str
    pivots: tuple


def _check_target_length(i: int):
    if i < 4 or i % 2:
        raise ValueError(f"two-element merge needs an even target length >= 4, got {i}")


@lru_cache(maxsize=65536)
def pivot_schedule(i: int, variant: str = "plain") -> PivotSchedule:
    """Pivot schedule for merging into a sequence of length i - 2.

    Walk steps run r = 1 .. ceil(2 lg i).  Each raw index ``ceil(alpha * i)``
    is clamped to i - 2 and dropped if it does not exceed the previous pivot,
    so the result is strictly increasing.  All arithmetic is exact: for odd
    plain steps ``floor(i * sqrt(2) / 2^k)`` comes from ``isqrt(2 i^2)``, and
    the starred fractions are dyadic rationals in i.
    """
    _check_target_length(i)
    if variant not in ("plain", "star"):
        raise ValueError(f"unknown variant {variant!r}")
    r_max = (i * i - 1).bit_length()  # == ceil(2 lg i)
    top = i - 2
    two_m = 1 << ceil_lg(i)
    root2i = isqrt(2 * i * i)  # == floor(i * sqrt(2))
    high_dev = 4 * i > 3 * two_m  # deviation ratio above 3/4
    pivots = []
    prev = 0
    for r in range(1, r_max + 1):
        if r % 2 == 0:
            raw = i - (i >> (r // 2))
        elif variant == "plain":
            raw = i - (root2i >> ((r + 1) // 2))
        else:
            k = (r + 1) // 2
            if high_dev:
                raw = i - ((4 * i - two_m) >> (k + 1))
            else:
                raw = i - ((4 * i + two_m) >> (k + 2))
        idx = raw if raw < top else top
        if idx > prev:
            pivots.append(idx)
            prev = idx
    return PivotSchedule(i, variant, tuple(pivots))


def _merge_core(a, b, seq, schedule: PivotSchedule, tally: Tally):
    """Run the merge on indices only; no output list is built.

    Returns ``(small, large, pos_small, pos_large, walk, block, tail)`` where
    the positions are insertion indices into ``seq`` (pos_small <= pos_large)
    and walk/block/tail are the comparison counts of the pivot walk, the block
    search for the smaller key, and the tail search for the larger key.  The
    pair-ordering comparison is charged but not included in the three parts.
    """
    if counting_compare(b, a, tally):
        small, large = b, a
    else:
        small, large = a, b
    prev = 0
    stop = -1
    walk = 0
    for piv in schedule.pivots:
        walk += 1
        if counting_compare(small, seq[piv - 1], tally):
            stop = piv
            break
        prev = piv
    n = len(seq)
    hi = stop - 1 if stop >= 0 else n
    mark = tally.count
    pos_small = _locate(small, seq, prev, hi, tally)
    block = tally.count - mark
    mark = tally.count
    pos_large = _locate(large, seq, pos_small, n, tally)
    tail = tally.count - mark
    return small, large, pos_small, pos_large, walk, block, tail


def two_merge(a, b, seq, tally: Tally, variant: str = "plain") -> list:
    """Merge two keys into a strictly increasing sequence, returning a new list.

    ``len(seq)`` must be even and >= 2 (target length i = len(seq) + 2).  The
    result and the comparison count do not depend on the order of a and b.
    """
    i = len(seq) + 2
    _check_target_length(i)
    schedule = pivot_schedule(i, variant)
    small, large, pos_small, pos_large, *_ = _merge_core(a, b, seq, schedule, tally)
    out = list(seq)
    out.insert(pos_small, small)
    out.insert(pos_large + 1, large)
    return out
