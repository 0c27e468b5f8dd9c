"""Full sorting algorithms built from the insertion primitives.

``binary_insertion_sort`` grows the sorted prefix one right-heavy insertion at
a time.  ``one_two_insertion`` grows it two keys per round: when the round
length's power-of-two deviation falls inside the policy window the pair goes
in through a single two-element merge, otherwise through two consecutive
right-heavy insertions.  The plain window [0.5511, 0.888] pairs with the plain
pivot schedule; the starred window [3/4 - sqrt(6)/12, 3/4 + sqrt(3)/12] with
the deviation-aware schedule.  Odd input lengths are handled by one trailing
right-heavy insertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Tally, counting_compare, pow2_ratio
from .rhbs import _locate
from .two_merge import _merge_core, pivot_schedule


@dataclass(frozen=True)
class VariantPolicy:
    """Names a round policy and its closed two-merge window (None: never merge)."""

    name: str
    window: tuple | None


BINARY = VariantPolicy("binary", None)
ONE_TWO = VariantPolicy("one_two", (0.5511, 0.888))
ONE_TWO_STAR = VariantPolicy(
    "one_two_star",
    (0.75 - math.sqrt(6) / 12, 0.75 + math.sqrt(3) / 12),
)


def use_two_merge(i: int, policy: VariantPolicy) -> bool:
    """True iff round length i falls in the policy's two-merge window."""
    if i < 4 or i % 2:
        raise ValueError(f"rounds have even length >= 4, got {i}")
    if policy.window is None:
        return False
    lo, hi = policy.window
    return lo <= pow2_ratio(i) <= hi


def binary_insertion_sort(seq, tally: Tally) -> list:
    """Sort distinct keys by repeated right-heavy binary insertion."""
    out = []
    for key in seq:
        out.insert(_locate(key, out, 0, len(out), tally), key)
    return out


def one_two_insertion(seq, tally: Tally, variant: str = "plain") -> list:
    """Sort distinct keys two per round, merging pairs inside the window.

    variant "plain" uses the [0.5511, 0.888] window with the plain pivot
    schedule; "star" uses the starred window and schedule.  Any length is
    accepted; an odd trailing key is inserted by one right-heavy search.
    """
    if variant == "plain":
        policy = ONE_TWO
    elif variant == "star":
        policy = ONE_TWO_STAR
    else:
        raise ValueError(f"unknown variant {variant!r}")
    keys = list(seq)
    n = len(keys)
    if n <= 1:
        return keys
    if counting_compare(keys[0], keys[1], tally):
        out = [keys[0], keys[1]]
    else:
        out = [keys[1], keys[0]]
    for i in range(4, n + 1, 2):
        x, y = keys[i - 2], keys[i - 1]
        if use_two_merge(i, policy):
            schedule = pivot_schedule(i, variant)
            small, large, pos_small, pos_large, *_ = _merge_core(x, y, out, schedule, tally)
            out.insert(pos_small, small)
            out.insert(pos_large + 1, large)
        else:
            out.insert(_locate(x, out, 0, len(out), tally), x)
            out.insert(_locate(y, out, 0, len(out), tally), y)
    if n % 2:
        out.insert(_locate(keys[-1], out, 0, len(out), tally), keys[-1])
    return out
