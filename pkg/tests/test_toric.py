import pytest

from hkbench.ffpoly import PolyRing
from hkbench.groebner import Ideal, bracket_power, maximal_ideal
from hkbench.hilbert import colength
from hkbench.toric import Semigroup, ToricError, closure_colength, toric_t

A1 = Semigroup.of([(2, 0), (0, 2), (1, 1)])


def test_semigroup_validation():
    with pytest.raises(ToricError):
        Semigroup.of([(1, 0), (2, 0)])
    with pytest.raises(ToricError):
        Semigroup.of([(1, 0), (0, 1)], [1, 0])


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 7, 25])
def test_a1_closed_forms(q):
    # ℓ(R/m^[q]) = (3q^2 - 1)/2 for odd q, 3q^2/2 for even q
    expect = (3 * q * q - 1) // 2 if q % 2 else 3 * q * q // 2
    assert A1.bracket_colength(q) == expect
    if q % 2:
        assert A1.splitting_number(q) == (q * q + 1) // 2


def test_toric_agrees_with_groebner():
    R = PolyRing(3, ["u", "v", "w"])
    u, v, w = R.gens()
    for q in (3, 9):
        I = Ideal(list(bracket_power(maximal_ideal(R), q).generators) + [u * v - w**2], R)
        assert A1.bracket_colength(q) == colength(I)


def test_segre():
    S = Semigroup.of([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)])
    assert [S.bracket_colength(q) for q in (3, 9)] == [35, 969]
    assert S.is_normal_upto(4)


def test_facets_and_t():
    assert sorted(w for w, _ in A1.facets()) == [(0, 1), (1, 0)]
    V3 = Semigroup.of([(3, 0), (2, 1), (1, 2), (0, 3)])
    assert toric_t(V3, [(1, 0, 0, 0), (0, 0, 0, 1)]) >= 1


def test_non_normal_detected():
    S = Semigroup.of([(4, 0), (3, 1), (1, 3), (0, 4)])  # misses (2, 2)
    assert not S.is_normal_upto(2)
    assert Semigroup.of([(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]).is_normal_upto(3)


def test_closure_colength():
    m2 = [(4, 0), (0, 4), (2, 2), (3, 1), (1, 3)]
    assert A1.colength(m2) == closure_colength(A1, m2) == 4
    # (u^2, v^2) is not closed: w^2 is integral over it
    assert A1.colength([(4, 0), (0, 4)]) == 8
    assert closure_colength(A1, [(4, 0), (0, 4)]) == 4
