import pytest
from hypothesis import given, settings, strategies as st

from hkbench.ffpoly import (
    ParseError,
    PolyRing,
    PolynomialError,
    exact_divide,
    is_power_of,
    is_prime,
)

R5 = PolyRing(5, ["x", "y", "z"])
x, y, z = R5.gens()


def test_parse_and_print():
    f = R5.parse("x^2 + 3*y*z - z")
    assert f.to_str() == "x^2 + 3*y*z + 4*z"
    assert R5.parse(f.to_str()) == f
    assert R5.parse("(x+y)^5") == x**5 + y**5  # Frobenius in characteristic 5
    assert R5.parse("-1") == R5.const(4)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        R5.parse("x^2 +* y")
    assert exc.value.position == 5
    with pytest.raises(PolynomialError):
        R5.parse("w + 1")


def test_modulus_must_be_prime():
    with pytest.raises(PolynomialError, match="modulus not prime"):
        PolyRing(4, ["x"])
    assert is_prime(65521) and not is_prime(1)


def test_degrees_and_homogeneity():
    f = x**2 + y * z
    assert f.degree() == 2 and f.is_homogeneous()
    assert not (x**2 + y).is_homogeneous()
    assert (x**2 + y).is_homogeneous([1, 2, 1])
    assert f.frobenius(5) == f**5


def test_is_power_of():
    assert is_power_of(1, 3) and is_power_of(27, 3)
    assert not is_power_of(12, 3) and not is_power_of(0, 3)


def test_exact_divide():
    f = (x + 2 * y) * (x - 2 * y)
    assert exact_divide(f, x + 2 * y) == x - 2 * y
    with pytest.raises(PolynomialError):
        exact_divide(x**2 + y, x + z)


terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.integers(0, 4),
    max_size=5,
)
points = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))


def poly(t):
    out = R5.zero()
    for e, c in t.items():
        out = out + R5.monomial(e, c)
    return out


@settings(max_examples=60, deadline=None)
@given(terms, terms, terms)
def test_ring_axioms(a, b, c):
    f, g, h = poly(a), poly(b), poly(c)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f + g) - g == f


@settings(max_examples=60, deadline=None)
@given(terms, terms, points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    f, g = poly(a), poly(b)
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt) % 5
    assert (f + g).evaluate(pt) == (f.evaluate(pt) + g.evaluate(pt)) % 5


@settings(max_examples=60, deadline=None)
@given(terms)
def test_print_parse_round_trip(a):
    f = poly(a)
    assert R5.parse(f.to_str()) == f


@settings(max_examples=40, deadline=None)
@given(terms, terms)
def test_exact_divide_recovers_factor(a, b):
    f, g = poly(a), poly(b)
    if not g:
        return
    assert exact_divide(f * g, g) == f
