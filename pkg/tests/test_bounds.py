import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hkbench.bounds import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    SKIPPED,
    ModuleAsIdeal,
    ae_floor,
    check_gorenstein_lower,
    check_main_lower,
    check_sandwich,
    main_floor,
    rank_inequality,
)
from hkbench.invariants import InvariantProfile

ALL = ["cm", "domain", "gorenstein", "normal", "reduced", "unmixed"]


def a1_profile(**kw):
    base = dict(name="A1", p=5, d=2, e=2, v=3, e_hk=1.5, e_hk_tol=0.0, s=0.5, s_tol=0.0, mu_hat=1,
                mu_reduction=1, r=1, t=1, regular=False, flags=ALL, reduction_status="verified")
    base.update(kw)
    return InvariantProfile(**base)


def by_name(vs):
    return {v.check: v for v in vs}


def test_sandwich_a1():
    v = by_name(check_sandwich(a1_profile()))
    assert all(x.status == PASS for x in v.values())
    assert v["ratio-lower"].equality and v["ratio-upper"].equality
    assert v["hl-upper"].equality


def test_sandwich_regular():
    prof = a1_profile(d=2, e=1, v=2, e_hk=1.0, s=1.0, mu_hat=0, regular=True)
    v = by_name(check_sandwich(prof))
    assert v["sandwich-lower"].status == v["sandwich-upper"].status == PASS
    assert v["ratio-lower"].status == v["ratio-upper"].status == SKIPPED


def test_corrupted_profile_fails_upper_bounds():
    v = by_name(check_sandwich(a1_profile(e_hk=2.5, e_hk_tol=0.01)))
    failed = {k for k, x in v.items() if x.status == FAIL}
    assert failed == {"sandwich-upper", "hl-upper", "ratio-upper"}


def test_tolerance_and_inconclusive():
    v = by_name(check_sandwich(a1_profile(e_hk=2.005, e_hk_tol=0.01)))
    assert v["sandwich-upper"].status == PASS and v["sandwich-upper"].within_tolerance
    v = by_name(check_sandwich(a1_profile(e_hk=2.005, e_hk_tol=math.inf)))
    assert v["sandwich-upper"].status == INCONCLUSIVE


def test_gating_is_total():
    prof = a1_profile(flags=["normal"], reduction_status="absent")
    for v in check_sandwich(prof)[2:] + check_gorenstein_lower(prof) + check_main_lower(prof):
        assert v.status == SKIPPED and v.lhs is None


def test_gorenstein_examples():
    v = by_name(check_gorenstein_lower(a1_profile()))
    assert v["gorenstein-lower[m]"].lhs == 1.5 and v["gorenstein-lower[m]"].status == PASS
    reg = a1_profile(e=1, v=2, e_hk=1.0, s=1.0, mu_reduction=0, regular=True)
    v = by_name(check_gorenstein_lower(reg))
    assert v["gorenstein-lower[m]"].lhs == 1.0 and v["gorenstein-lower[m]"].status == PASS
    v = by_name(check_gorenstein_lower(a1_profile(e=3, e_hk=2.25, s=0.0, mu_reduction=1)))
    assert v["gorenstein-lower[m]-s0"].lhs == 1.5


def test_main_floor_values():
    assert main_floor(2, 2, 1, 1) == Fraction(5, 4)
    assert main_floor(3, 2, 1, 1) == 1 + Fraction(1, 27)
    assert ae_floor(2) == 1 + Fraction(1, 18)
    v = by_name(check_main_lower(a1_profile()))
    assert v["main-lower"].lhs == 1.25 and v["main-lower"].status == PASS
    assert v["ae-lower"].status == PASS


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(2, 12), st.integers(1, 11), st.integers(1, 6), st.integers(0, 5), st.integers(0, 5))
def test_monotone_substitution(d, e, mu, t, dmu, dt):
    """Smaller mu or t never raises the floor, so mu_hat and r are safe substitutes."""
    if mu >= e:
        return
    mu2 = min(mu + dmu, e - 1)
    assert main_floor(d, e, mu, t) <= main_floor(d, e, mu2, t + dt)


def test_rank_inequality_example():
    # k[x,y], J = m^2, I = (x, y^2), K = (x, y): ℓ(IK/JK) = 2 >= 1
    J = [(2, 0), (1, 1), (0, 2)]
    I = [(1, 0), (0, 2)]
    v = rank_inequality(J, I, ModuleAsIdeal([(1, 0), (0, 1)], 1), 1, 2)
    assert (v.lhs, v.rhs, v.status) == (1.0, 2.0, PASS)
    v = rank_inequality(J, I, ModuleAsIdeal.free(2), 1, 2)
    assert v.rhs == 2.0 and v.status == PASS


def test_radical_descent_examples():
    from hkbench.ffpoly import PolyRing
    from hkbench.invariants import ProfileConfig, RingPresentation, compute_profile, radical_extension
    from hkbench.bounds import check_radical_descent

    R = RingPresentation(PolyRing(5, ["x", "y"]), [])
    prof = compute_profile(R, ProfileConfig())
    x, _ = R.ambient.gens()
    for n in (1, 2):
        vs, data = check_radical_descent(R, prof, radical_extension(R, x, n))
        assert all(v.status == PASS for v in vs)
        # colength of (u^(nq), y^q) is n q^2
        assert data["hk_mS"]["samples"][2] == [25, n * 625]


def test_integrally_closed_examples(corpus_dir):
    from hkbench.bounds import check_integrally_closed
    from hkbench.invariants import ProfileConfig, compute_profile, hk_series, power_spec
    from hkbench.workbench.ringfile import load_ring_file

    R = load_ring_file(corpus_dir / "quadric2_p5.ring").ring
    prof = compute_profile(R, ProfileConfig())
    v = by_name(check_integrally_closed(prof, "m", 1, prof.hk_series, True))
    assert v["closed-additive[m]"].status == PASS and v["closed-additive[m]"].equality
    hs = hk_series(R, power_spec(R, 2), 125)
    # samples are 5q^2 - 1, so e_HK(m^2) = 5
    assert all(L == 5 * q * q - 1 for q, L in hs.samples[1:])
    v = by_name(check_integrally_closed(prof, "m2", 4, hs, True))
    assert v["closed-additive[m2]"].status == PASS and v["closed-additive[m2]"].lhs == pytest.approx(4.5, abs=1e-3)
    v = by_name(check_integrally_closed(prof, "m2", 4, hs, False))
    assert v["closed-additive[m2]"].status == SKIPPED
