import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hkbench.ffpoly import PolyRing
from hkbench.groebner import (
    Ideal,
    WorkLimitExceeded,
    WorkLimits,
    audit_basis,
    bracket_power,
    colon_ideal,
    intersection,
    maximal_ideal,
    normal_form,
    power_of_ideal,
)

R = PolyRing(5, ["x", "y", "z"])
x, y, z = R.gens()
SX = sp.symbols("x y z")


def _canon(polys, p):
    """Monic coefficient dictionaries, for comparing bases across libraries."""
    out = set()
    for f in polys:
        d = {tuple(e): int(c) % p for e, c in f.items() if int(c) % p}
        lead = max(d, key=lambda e: (sum(e), tuple(-a for a in reversed(e))))
        inv = pow(d[lead], -1, p)
        out.add(frozenset((e, c * inv % p) for e, c in d.items()))
    return out


def _sympy_basis(gens, p):
    exprs = [sp.sympify(g.to_str().replace("^", "**"), locals=dict(zip("xyz", SX))) for g in gens]
    G = sp.groebner(exprs, *SX, order="grevlex", modulus=p)
    return [sp.Poly(g, *SX).as_dict() for g in G.exprs]


def _ours(gens):
    return [dict(g.terms) for g in Ideal(gens, R).basis().elements]


def test_small_basis_matches_sympy():
    gens = [x**2 + y * z, x * y - z**2]
    assert _canon(_ours(gens), 5) == _canon(_sympy_basis(gens, 5), 5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_bases_match_sympy(seed):
    rnd = random.Random(seed)
    gens = []
    for _ in range(rnd.randint(1, 3)):
        f = R.zero()
        for _ in range(rnd.randint(1, 4)):
            e = tuple(rnd.randint(0, 2) for _ in range(3))
            f = f + R.monomial(e, rnd.randint(1, 4))
        gens.append(f)
    if all(not g for g in gens):
        return
    assert _canon(_ours(gens), 5) == _canon(_sympy_basis(gens, 5), 5)


def test_basis_audit_and_membership():
    I = Ideal([x**3 - y * z, y**2 - x * z], R)
    B = I.basis()
    assert audit_basis(B)
    for g in I.generators:
        assert not normal_form(g, B)
    assert normal_form(x, B)


def test_colon_and_intersection():
    I = Ideal([x**2, x * y], R)
    assert colon_ideal(I, x).equals(Ideal([x, y], R))
    J = intersection(Ideal([x], R), Ideal([y], R))
    assert J.equals(Ideal([x * y], R))


def test_bracket_and_ordinary_powers():
    m = maximal_ideal(R)
    assert bracket_power(m, 5).equals(Ideal([x**5, y**5, z**5], R))
    assert len(power_of_ideal(m, 2).generators) == 6
    assert power_of_ideal(m, 0).is_unit()


def test_work_limits():
    I = Ideal([x**7 + y**5 * z + z**3, y**6 - x * z**4, x * y * z - 1 + z], R)
    with pytest.raises(WorkLimitExceeded):
        I.basis(limits=WorkLimits(max_pairs=3))
