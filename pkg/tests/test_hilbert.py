import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hkbench.ffpoly import PolyRing
from hkbench.groebner import Ideal, bracket_power, maximal_ideal
from hkbench.hilbert import (
    MemoryCapExceeded,
    NotZeroDimensional,
    Staircase,
    colength,
    colength_linalg,
    hilbert_series_numerator,
    krull_dimension,
    multiplication_matrix,
)

R2 = PolyRing(5, ["x", "y"])
R3 = PolyRing(5, ["x", "y", "z"])


def brute_count(gens, box):
    return sum(
        1
        for u in itertools.product(*(range(b) for b in box))
        if not any(all(a <= c for a, c in zip(g, u)) for g in gens)
    )


def test_staircase_examples():
    x, y = R2.gens()
    assert colength(Ideal([x**2, y**3], R2)) == 6
    st_ = Staircase.of([(2, 0), (0, 3), (1, 1)], 2)
    assert st_.count() == 4
    assert sorted(st_.standard_monomials()) == [(0, 0), (0, 1), (0, 2), (1, 0)]
    with pytest.raises(NotZeroDimensional):
        Staircase.of([(2, 0)], 2).count()


def test_colength_with_relation():
    x, y, z = R3.gens()
    I = Ideal([x**3, y**3, z**3, x**2 + y**2 + z**2], R3)
    assert colength(I) == 13


gens_strategy = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=0, max_size=5)


@settings(max_examples=60, deadline=None)
@given(gens_strategy, st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)))
def test_count_matches_enumeration(extra, powers):
    gens = [(powers[0], 0, 0), (0, powers[1], 0), (0, 0, powers[2])] + list(extra)
    gens = [g for g in gens if any(g)]
    assert Staircase.of(gens, 3).count() == brute_count(gens, powers)


@settings(max_examples=40, deadline=None)
@given(gens_strategy)
def test_hilbert_function_matches_enumeration(gens):
    gens = [g for g in gens if any(g)]
    H = hilbert_series_numerator(Staircase.of(gens, 3))
    for k in range(7):
        expect = sum(
            1
            for u in itertools.product(range(k + 1), repeat=3)
            if sum(u) == k and not any(all(a <= c for a, c in zip(g, u)) for g in gens)
        )
        assert H.hilbert_function(k) == expect


def test_dimension_and_h_vectors():
    x, y, z = R3.gens()
    assert krull_dimension(Ideal([x**2 + y**2 + z**2], R3)) == 2
    assert krull_dimension(Ideal([], R3)) == 3
    H = hilbert_series_numerator(Staircase.from_ideal(Ideal([x * z - y**2], R3)))
    assert H.krull_dim == 2 and H.multiplicity == 2 and tuple(H.h_vector) == (1, 1)


@pytest.mark.parametrize("method", ["dense", "graded", "companion"])
def test_linalg_quadric(method):
    R = PolyRing(3, ["x", "y", "z"])
    x, y, z = R.gens()
    f = x**2 + y**2 + z**2
    # the Groebner count is the oracle
    expect = colength(Ideal([x**9, y**9, z**9, f], R))
    assert expect == 121
    assert colength_linalg(f, 9, method=method) == expect


def test_linalg_small():
    R = PolyRing(2, ["x", "y"])
    x, y = R.gens()
    assert colength_linalg(x + y, 2) == 2
    assert colength_linalg(x, 4) == 4


def test_multiplication_matrix_shape():
    R = PolyRing(3, ["x", "y"])
    x, y = R.gens()
    M = multiplication_matrix(x + y, 3)
    assert M.shape == (9, 9)


def test_memory_cap():
    R = PolyRing(3, ["x", "y", "z", "w"])
    x, y, z, w = R.gens()
    with pytest.raises(MemoryCapExceeded):
        colength_linalg(x**2 + y**2 + z**2 + w**2, 27, method="dense", mem_cap=1000)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_linalg_matches_groebner_random(seed):
    rnd = random.Random(seed)
    p = rnd.choice([2, 3, 5])
    R = PolyRing(p, ["x", "y", "z"])
    f = R.zero()
    deg = rnd.randint(1, 3)
    for e in itertools.product(range(deg + 1), repeat=3):
        if sum(e) == deg and rnd.random() < 0.5:
            f = f + R.monomial(e, rnd.randint(1, p - 1))
    if not f:
        return
    q = p if p > 2 else 4
    I = bracket_power(maximal_ideal(R), q)
    assert colength_linalg(f, q) == colength(Ideal(list(I.generators) + [f], R))
