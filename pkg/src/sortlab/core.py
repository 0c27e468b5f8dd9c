"""Counting infrastructure shared by every sorting routine in the package.

All key orderings are funneled through :func:`counting_compare`, which charges
exactly one unit to a per-run :class:`Tally`.  Inputs are sequences of
pairwise-distinct keys; comparing two equal keys raises
:class:`DuplicateKeyError` because the whole cost model assumes distinctness.

The module also provides the power-of-two deviation ratio ``x / 2^ceil(lg x)``
that drives every piecewise cost formula, plus a documented, seedable
Fisher-Yates permutation generator so every experiment is bit-reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction


class DuplicateKeyError(ValueError):
    """Raised when two equal keys meet in a comparison."""


class Tally:
    """Mutable comparison counter for a single sorting run.

    A Tally is confined to one run; independent runs may execute in
    parallel, each owning its own counter.
    """

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def __repr__(self):
        return f"Tally(count={self.count})"


def counting_compare(a, b, tally: Tally) -> bool:
    """Strictly order two distinct keys, charging one comparison.

    Returns True when ``a < b``, False when ``a > b``.  Equal keys raise
    DuplicateKeyError before the comparison is charged.
    """
    if a == b:
        raise DuplicateKeyError(f"duplicate key {a!r}: keys must be pairwise distinct")
    tally.count += 1
    return a < b


def ceil_lg(x: int) -> int:
    """ceil(lg x) for a positive integer, computed exactly."""
    if x < 1:
        raise ValueError(f"ceil_lg needs x >= 1, got {x}")
    return (x - 1).bit_length()


def ceil_lg_real(x: float) -> int:
    """ceil(lg x) for a positive real, guarded against float rounding."""
    if x <= 0:
        raise ValueError(f"ceil_lg_real needs x > 0, got {x}")
    e = math.ceil(math.log2(x))
    while 2.0 ** (e - 1) >= x:
        e -= 1
    while 2.0 ** e < x:
        e += 1
    return e


def pow2_ratio(x) -> float:
    """Ratio ``x / 2^ceil(lg x)`` in (1/2, 1]; 1.0 exactly at powers of two.

    Defined for any real ``x >= 1``.  Integer arguments are computed exactly
    (the result is a dyadic rational, representable in a float for
    ``x < 2**53``).
    """
    if isinstance(x, int):
        if x < 1:
            raise ValueError(f"pow2_ratio needs x >= 1, got {x}")
        return x / (1 << ceil_lg(x))
    if x < 1:
        raise ValueError(f"pow2_ratio needs x >= 1, got {x}")
    return x / 2.0 ** ceil_lg_real(x)


def _pow2_ratio_any(x: float) -> float:
    # Same ratio extended to any x > 0 (block widths shrink below 1 for
    # deep pivot indices); internal use only.
    return x / 2.0 ** ceil_lg_real(x)


def pow2_ratio_exact(i: int) -> Fraction:
    """Exact rational ``i / 2^ceil(lg i)`` for a positive integer."""
    return Fraction(i, 1 << ceil_lg(i))


def random_permutation(n: int, seed: int) -> list:
    """Uniform random permutation of ``1..n``, deterministic for a fixed seed.

    Fisher-Yates over ``random.Random(seed)`` (the Mersenne Twister), drawing
    ``randrange(j + 1)`` for j = n-1 .. 1.  Both the generator and the drawing
    order are fixed, so results are bit-reproducible across runs and
    platforms.
    """
    if n < 1:
        raise ValueError(f"random_permutation needs n >= 1, got {n}")
    rng = random.Random(seed)
    keys = list(range(1, n + 1))
    for j in range(n - 1, 0, -1):
        t = rng.randrange(j + 1)
        keys[j], keys[t] = keys[t], keys[j]
    return keys


def mix_seed(seed: int, k: int) -> int:
    """Derive the k-th child seed from a master seed (fixed LCG-style mix).

    Used to give every Monte Carlo trial its own permutation seed so results
    do not depend on how trials are chunked across worker processes.
    """
    return (seed * 6364136223846793005 + (k + 1) * 1442695040888963407) & ((1 << 63) - 1)


def is_sorted_permutation(original, result) -> bool:
    """True iff ``result`` is strictly increasing and a permutation of ``original``."""
    result = list(result)
    if len(result) != len(original):
        return False
    for x, y in zip(result, result[1:]):
        if not x < y:
            return False
    return sorted(original) == result


@dataclass(frozen=True)
class Expectation:
    """An expected comparison count with provenance.

    value       exact Fraction or float
    source      one of "formula", "exact", "monte_carlo"
    error_band  standard error (monte_carlo) or the magnitude of the
                formula's vanishing term; None for exact values
    """

    value: object
    source: str
    error_band: float | None = None

    def __float__(self):
        return float(self.value)
