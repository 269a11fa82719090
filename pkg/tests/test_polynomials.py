import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkelliptic.errors import InvalidInput, NotPPower
from hkelliptic.fields import make_extension
from hkelliptic.polynomials import (
    HomogeneousPoly,
    frobenius_power,
    monomials,
    multiply,
    parse_poly,
    poly_from_json,
    prime_power_exponent,
)

F2 = make_extension(2)
F8 = make_extension(2, 3)


def test_char2_product_of_cubics():
    lam = F8.gen()
    syms = {"l": lam.coeffs}
    f = parse_poly("X^3 + Y^3 + Z^3", F8, 3)
    g = parse_poly("X^3 + Y^3 + Z^3 + l*X*Y*Z", F8, 3, syms)
    expect = parse_poly("X^6 + Y^6 + Z^6 + l*X^4*Y*Z + l*X*Y^4*Z + l*X*Y*Z^4", F8, 3, syms)
    assert multiply(f, g) == expect


def test_identity_and_frobenius_squares():
    f = parse_poly("X + Y", F2, 3)
    assert f * HomogeneousPoly.one(F2, 3) == f
    assert f**2 == parse_poly("X^2 + Y^2", F2, 3)
    assert frobenius_power(f, 2) == parse_poly("X^2 + Y^2", F2, 3)
    assert frobenius_power(f, 1) == f


def test_termwise_frobenius_applies_to_coefficients():
    syms = {"l": F8.gen().coeffs}
    f = parse_poly("X^2 + l*Y*Z", F8, 3, syms)
    expect = parse_poly("X^4 + l^2*Y^2*Z^2", F8, 3, syms)
    assert frobenius_power(f, 2) == expect == f * f


def test_prime_power_exponent():
    assert prime_power_exponent(1, 5) == 0
    assert prime_power_exponent(125, 5) == 3
    with pytest.raises(NotPPower):
        prime_power_exponent(6, 2)


def test_monomials_are_in_descending_grevlex():
    mons = monomials(3, 2)
    assert mons == ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))


def test_parser_rejects_bad_input():
    with pytest.raises(InvalidInput):
        parse_poly("X^2 + Y", F2, 3)
    with pytest.raises(InvalidInput):
        parse_poly("X^2 + Q*Y", F2, 3)
    with pytest.raises(InvalidInput):
        parse_poly("", F2, 3)


def test_json_forms_agree():
    F5 = make_extension(5)
    f = parse_poly("2*X0^2 + X1*X2 - X2^2", F5, 3)
    assert poly_from_json(f.to_json(), F5, 3) == f
    assert parse_poly(f.to_text(), F5, 3) == f


def _random_poly(draw, ctx, nvars, degree):
    mons = monomials(nvars, degree)
    coeffs = draw(st.lists(st.integers(0, ctx.order - 1), min_size=len(mons), max_size=len(mons)))
    return HomogeneousPoly(ctx, nvars, degree, dict(zip(mons, coeffs)))


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1)]), st.integers(1, 3), st.integers(1, 2))
def test_frobenius_matches_repeated_multiplication(data, pk, degree, e):
    ctx = make_extension(*pk)
    f = _random_poly(data.draw, ctx, 3, degree)
    q = ctx.p**e
    assert frobenius_power(f, q) == f**q


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from([(2, 1), (3, 1), (2, 2)]))
def test_ring_laws(data, pk):
    ctx = make_extension(*pk)
    f, g, h = (_random_poly(data.draw, ctx, 3, 2) for _ in range(3))
    assert f * g == g * f
    assert (f + g) * h == f * h + g * h
    assert (f - f).is_zero()


def test_linear_substitution_and_evaluation():
    F7 = make_extension(7)
    f = parse_poly("X^3 + Y^3 + Z^3", F7, 3)
    swap = [HomogeneousPoly.variable(F7, 3, i) for i in (1, 0, 2)]
    assert f.substitute_linear(swap) == f
    assert f.evaluate([1, 6, 0]) == 0
