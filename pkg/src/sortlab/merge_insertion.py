"""Merge-insertion sort (Ford-Johnson).

Keys are paired and the pair winners are sorted recursively; the loser of the
smallest winner is prepended for free, and the remaining losers are inserted
into the growing chain in batches delimited by the Jacobsthal-type bounds
``t_k = (2^(k+1) + (-1)^k) / 3`` = 1, 3, 5, 11, 21, ...  Within a batch the
pending keys go in by decreasing index, each via a right-heavy binary search
over the chain prefix strictly below its partner, which caps every insertion
in batch k at k comparisons.  An odd leftover key is treated as the final
pending index and searched over the whole chain.

Chain positions of the partners shift as pendings land below them; a small
Fenwick counter tracks those shifts by original chain slot, so the prefix
bound for each insertion is exact without any bookkeeping comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Tally, counting_compare
from .rhbs import _locate


def _bounds():
    # 1, 3, 5, 11, 21, 43, ...  (t_k = t_{k-1} + 2 t_{k-2})
    a, b = 1, 3
    while True:
        yield a
        a, b = b, b + 2 * a


@dataclass(frozen=True)
class InsertionPlan:
    """Batch bounds covering the pending insertions for an input of length n."""

    n: int
    bounds: tuple


def batch_bounds(n: int) -> InsertionPlan:
    """Bounds 1, 3, 5, 11, ... up to the first bound >= n."""
    if n < 1:
        raise ValueError(f"batch_bounds needs n >= 1, got {n}")
    out = []
    for t in _bounds():
        out.append(t)
        if t >= n:
            break
    return InsertionPlan(n, tuple(out))


class _PrefixCounter:
    """Fenwick counter over original chain slots; index bookkeeping only."""

    __slots__ = ("size", "tree")

    def __init__(self, size: int):
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, idx: int):
        i = idx + 1
        tree = self.tree
        while i <= self.size:
            tree[i] += 1
            i += i & -i

    def prefix(self, idx: int) -> int:
        i = idx + 1
        s = 0
        tree = self.tree
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s


def _fj(items, tally, audit):
    # items: list of (key, payload); returns a new list sorted by key.
    n = len(items)
    if n <= 1:
        return list(items)

    winners = []
    for q in range(0, n - 1, 2):
        x = items[q]
        y = items[q + 1]
        if counting_compare(x[0], y[0], tally):
            x, y = y, x
        winners.append((x[0], (x, y)))
    odd = items[-1] if n % 2 else None

    ranked = _fj(winners, tally, audit)

    mains = []
    pend = []
    for _, (w, l) in ranked:
        mains.append(w)
        pend.append(l)
    m = len(mains)

    # Chain starts as [loser-of-smallest, main_1, ..., main_m]; main_j sits at
    # original slot j.  tags[x] is the original slot the cell at x belongs to.
    keys = [pend[0][0]]
    cells = [pend[0]]
    tags = [0]
    for j in range(m):
        keys.append(mains[j][0])
        cells.append(mains[j])
        tags.append(j + 1)

    counter = _PrefixCounter(m + 2)
    last = m + 1 if odd is not None else m
    gen = _bounds()
    lo = next(gen)  # pending index 1 is already in the chain
    k = 1
    while lo < last:
        hi_t = next(gen)
        k += 1
        for j in range(min(hi_t, last), lo, -1):
            if j == m + 1:
                cell = odd
                hi = len(keys)  # leftover key: no known upper bound
            else:
                cell = pend[j - 1]
                hi = j + counter.prefix(j)  # current chain index of main_j
            mark = tally.count
            pos = _locate(cell[0], keys, 0, hi, tally)
            if audit is not None:
                audit.append((k, tally.count - mark))
            tag = tags[pos] if pos < len(tags) else m + 1
            keys.insert(pos, cell[0])
            cells.insert(pos, cell)
            tags.insert(pos, tag)
            counter.add(tag)
        lo = hi_t
    return cells


def merge_insertion_sort(seq, tally: Tally, _audit=None) -> list:
    """Sort distinct keys, returning a new list.

    Worst case over all inputs is ceil(lg n!) for n <= 11 and the average at
    the favourable lengths ``ceil(2^k / 3)`` approaches n lg n - 1.415 n.
    ``_audit``, when a list, collects (batch, comparisons) per pending
    insertion; used by tests to pin the per-batch cost cap.
    """
    keys = list(seq)
    if len(keys) <= 1:
        return keys
    cells = _fj([(key, None) for key in keys], tally, _audit)
    return [cell[0] for cell in cells]
