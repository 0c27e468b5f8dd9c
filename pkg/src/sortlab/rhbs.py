"""Right-heavy binary search insertion.

A binary insertion into m sorted keys costs either ``ceil(lg(m+1)) - 1`` or
``ceil(lg(m+1))`` comparisons depending on the landing gap.  The pivot here is
always chosen so that one side of the split holds ``(power of two) - 1``
elements, which makes the cost monotone in the landing gap: the cheap gaps
form a prefix, the expensive ones a suffix.  Cheap outcomes then line up with
the likelier (low) ranks when the inserted key is known to be the smaller of a
pair, which is what the two-element merge exploits.

Gap indices are 0-based: gap g means the key lands between the g-th and
(g+1)-th existing elements, with gap 0 before everything.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Tally, ceil_lg, counting_compare


def rhbs_pivot(i: int) -> int:
    """1-based pivot position for a search over i sorted elements.

    Chosen so that either the left side has ``2^(q-2) - 1`` elements or the
    right side has ``2^(q-1) - 1`` elements, q = ceil(lg(i+1)).  For example
    with 8 <= i <= 15 the first probe is t_4 when i <= 11 and t_(i-7) when
    i >= 12.
    """
    if i < 1:
        raise ValueError(f"rhbs_pivot needs i >= 1, got {i}")
    if i == 1:
        return 1
    q = i.bit_length()  # == ceil(lg(i+1))
    half = 1 << (q - 2)
    if i <= 3 * half - 1:
        return half
    return i - 2 * half + 1


def _locate(key, seq, lo: int, hi: int, tally: Tally) -> int:
    """Insertion index for key within the sorted slice seq[lo:hi].

    Pure index arithmetic plus counted comparisons; never copies the
    sequence.  An empty slice costs zero comparisons.  The pivot rule is the
    same as rhbs_pivot, inlined for speed (the agreement is tested).
    """
    while lo < hi:
        i = hi - lo
        if i == 1:
            d = 1
        else:
            q = i.bit_length()
            half = 1 << (q - 2)
            d = half if i <= 3 * half - 1 else i - 2 * half + 1
        if counting_compare(key, seq[lo + d - 1], tally):
            hi = lo + d - 1
        else:
            lo = lo + d
    return lo


def rhbs_insert(key, seq, tally: Tally) -> list:
    """Insert key into a strictly increasing sequence, returning a new list.

    Costs ceil(lg(m+1)) - 1 or ceil(lg(m+1)) comparisons for m = len(seq) >= 1
    and zero for an empty sequence.
    """
    pos = _locate(key, seq, 0, len(seq), tally)
    out = list(seq)
    out.insert(pos, key)
    return out


def rhbs_gap_cost(gaps: int, gap: int) -> int:
    """Exact comparison count for a key landing in the given gap.

    ``gaps`` is the number of landing positions, i.e. m + 1 for a sequence of
    m elements.  The first ``2^ceil(lg gaps) - gaps`` gaps cost
    ``ceil(lg gaps) - 1``; the remaining suffix costs ``ceil(lg gaps)``.
    """
    if gaps < 1:
        raise ValueError(f"rhbs_gap_cost needs gaps >= 1, got {gaps}")
    if not 0 <= gap < gaps:
        raise ValueError(f"gap {gap} out of range for {gaps} gaps")
    q = ceil_lg(gaps)
    cheap = (1 << q) - gaps
    return q - 1 if gap < cheap else q


def rhbs_average(gaps: int) -> Fraction:
    """Mean comparison count over all gaps, as an exact rational.

    Equals ``ceil(lg gaps) + 1 - 2^ceil(lg gaps) / gaps``, which is also the
    exact mean of rhbs_gap_cost over the uniform gap distribution.
    """
    if gaps < 1:
        raise ValueError(f"rhbs_average needs gaps >= 1, got {gaps}")
    q = ceil_lg(gaps)
    return Fraction((q + 1) * gaps - (1 << q), gaps)
