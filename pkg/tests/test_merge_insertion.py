import math
import random

import pytest

from sortlab.analytics import info_lower_bound
from sortlab.core import DuplicateKeyError, Tally, random_permutation
from sortlab.merge_insertion import batch_bounds, merge_insertion_sort
from sortlab.oracles import exhaustive_average, monte_carlo, worst_case


def test_batch_bounds_examples():
    assert batch_bounds(21).bounds == (1, 3, 5, 11, 21)
    assert batch_bounds(1).bounds == (1,)
    assert batch_bounds(4).bounds == (1, 3, 5)
    with pytest.raises(ValueError):
        batch_bounds(0)


def test_batch_bounds_closed_form_and_recurrence():
    bounds = batch_bounds(10**6).bounds
    for k, t in enumerate(bounds, start=1):
        assert t == (2 ** (k + 1) + (-1) ** k) // 3
    for a, b, c in zip(bounds, bounds[1:], bounds[2:]):
        assert c == b + 2 * a


def test_sorts_exhaustively_small():
    from itertools import permutations

    for n in range(1, 8):
        expected = list(range(1, n + 1))
        for perm in permutations(expected):
            t = Tally()
            assert merge_insertion_sort(perm, t) == expected


def test_sorts_random_inputs():
    for n in (33, 100, 1000, 4095):
        perm = random_permutation(n, seed=n)
        t = Tally()
        assert merge_insertion_sort(perm, t) == sorted(perm)


def test_duplicates_raise():
    with pytest.raises(DuplicateKeyError):
        merge_insertion_sort([3, 3, 1], Tally())


def test_worst_case_meets_information_floor():
    for n in range(1, 9):
        assert worst_case("merge_insertion", n) == info_lower_bound(n)


def test_batch_insertions_respect_cost_cap():
    rng = random.Random(7)
    for n in (10, 37, 100, 341, 1000):
        perm = random_permutation(n, seed=rng.randrange(2**32))
        audit = []
        merge_insertion_sort(perm, Tally(), _audit=audit)
        assert audit, "expected batched insertions"
        assert all(cost <= k for k, cost in audit)


def test_generic_keys():
    words = ["pear", "apple", "fig", "quince", "date", "cherry", "lime"]
    assert merge_insertion_sort(words, Tally()) == sorted(words)


def test_average_small_smoke():
    # Exact small average sits between the information floor and the worst case.
    mean = exhaustive_average("merge_insertion", 5).value
    assert math.log2(math.factorial(5)) <= mean <= 7
    assert worst_case("merge_insertion", 5) == 7


def test_favourable_length_constant_smoke():
    exp = monte_carlo("merge_insertion", 342, 1500, seed=77)
    c = (exp.value - 342 * math.log2(342)) / 342
    assert -1.44 < c < -1.40
