import itertools
import math
from fractions import Fraction

import pytest

from hkbench.zigzag import (
    MAX_D,
    boustrophedon,
    conjecture_floor,
    series_coefficients,
    zigzag_numbers,
)


def alternating_count(n):
    """Number of permutations of n letters with a_1 > a_2 < a_3 > ... (brute force)."""
    if n < 2:
        return 1
    return sum(
        1
        for s in itertools.permutations(range(n))
        if all((s[i] > s[i + 1]) == (i % 2 == 0) for i in range(n - 1))
    )


def test_small_values_against_permutations():
    t = zigzag_numbers(8)
    assert list(t.c) == [alternating_count(n) for n in range(9)]


def test_ratios():
    t = zigzag_numbers(5)
    got = [Fraction(t.c[d], math.factorial(d)) for d in range(2, 6)]
    assert got == [Fraction(1, 2), Fraction(1, 3), Fraction(5, 24), Fraction(2, 15)]


def test_two_algorithms_and_table_invariants():
    a, b = boustrophedon(MAX_D), series_coefficients(MAX_D)
    assert a == b
    t = zigzag_numbers(MAX_D)
    assert t.c[:3] == (1, 1, 1)
    assert all(c > 0 for c in t.c)
    fl = t.floors
    assert all(fl[d] > fl[d + 1] > 1 for d in range(2, MAX_D))
    for d, f in enumerate(fl):
        assert math.factorial(d) % f.denominator == 0


def test_floors():
    assert conjecture_floor(2) == Fraction(3, 2)
    assert conjecture_floor(3) == Fraction(4, 3)
    assert conjecture_floor(4) == Fraction(29, 24)
    with pytest.raises(ValueError):
        conjecture_floor(0)
    with pytest.raises(ValueError):
        zigzag_numbers(MAX_D + 1)
