import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hkbench.closure import (
    ClosureError,
    NewtonRegion,
    closed_chain_length,
    closure_exponents,
    in_closure_bruteforce,
    is_integrally_closed,
    monomial_closure,
    socle_ideal,
)
from hkbench.ffpoly import PolyRing
from hkbench.groebner import Ideal

R = PolyRing(5, ["x", "y"])
x, y = R.gens()


def _in(u, gens):
    return any(all(a <= b for a, b in zip(g, u)) for g in gens)


def test_closure_examples():
    assert closure_exponents([(3, 0), (0, 3)]) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert closure_exponents([(2, 0), (0, 2)]) == [(0, 2), (1, 1), (2, 0)]
    assert is_integrally_closed([(1, 0), (0, 2)])
    J = monomial_closure(Ideal([x**4, y**2], R))
    assert J.equals(Ideal([x**4, x**2 * y, y**2], R))


def test_newton_region_membership():
    N = NewtonRegion.of([(3, 0), (0, 3)])
    assert N.contains((1, 2)) and not N.contains((1, 1))


def test_bruteforce_membership():
    assert in_closure_bruteforce((1, 1), [(2, 0), (0, 2)])
    assert not in_closure_bruteforce((1, 0), [(2, 0), (0, 2)])


def test_socles():
    z = R.one()
    assert [m.to_str() for m in socle_ideal(Ideal([x**2, y**2], R)).representatives] == ["x*y"]
    assert socle_ideal(Ideal([x, y], R)).dimension == 1
    assert socle_ideal(Ideal([x**2, x * y, y**2], R)).dimension == 2
    s = socle_ideal(Ideal([x**2 + y**2, x * y], R))
    assert s.dimension == 1
    rep = s.representatives[0]
    assert rep.degree() == 2 and rep != z


def test_chains():
    m = [(1, 0), (0, 1)]
    m2 = closure_exponents([(2, 0), (0, 2)])
    c = closed_chain_length(m2, m)
    assert (c.length, c.index) == (2, 1)
    m3 = closure_exponents([(3, 0), (0, 3)])
    c = closed_chain_length(m3, m)
    assert c.validate()
    assert (c.length, c.index) == (5, 4)
    assert c.colengths == sorted(c.colengths, reverse=True)
    with pytest.raises(ClosureError):
        closed_chain_length([(2, 0), (0, 2)], m)
    with pytest.raises(ClosureError):
        closed_chain_length(m, m3)


def test_ideals_u_i_y_are_closed():
    for i in range(1, 6):
        assert is_integrally_closed([(i, 0), (0, 1)])


ideals3 = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4)


@settings(max_examples=100, deadline=None)
@given(ideals3, ideals3)
def test_closure_properties(a, b):
    a = [g for g in a if any(g)] or [(1, 0, 0)]
    b = [g for g in b if any(g)] or [(0, 1, 0)]
    ca = closure_exponents(a)
    # extensive, idempotent
    assert all(_in(g, ca) for g in a)
    assert closure_exponents(ca) == ca
    # monotone: a ⊆ a + b implies cl(a) ⊆ cl(a + b)
    cab = closure_exponents(a + b)
    assert all(_in(g, cab) for g in ca)
    # every closure generator is integral by an explicit power
    assert all(in_closure_bruteforce(g, a) for g in ca)


@settings(max_examples=30, deadline=None)
@given(ideals3)
def test_closure_is_complete_in_a_box(a):
    """Box points integral by l <= 12 are all in the computed closure."""
    a = [g for g in a if any(g)] or [(1, 1, 1)]
    ca = closure_exponents(a)
    hi = [max(g[i] for g in a) for i in range(3)]
    for u in itertools.product(*(range(h + 1) for h in hi)):
        if in_closure_bruteforce(u, a):
            assert _in(u, ca)
