from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkelliptic.errors import DecompositionInconsistent, H1Unresolved, NonIntegralLength, NotPPower
from hkelliptic.formulas import (
    AutoZero,
    Constant,
    OracleBacked,
    SplittingCase,
    SummandData,
    ehk_lower_bound_check,
    gamma_cycle,
    hk_complete_embedding,
    hk_general,
    hk_semistable,
    hk_space_curve,
    pers,
)

S = SummandData


def test_periodic_defect():
    for q in (1, 3, 5, 7, 25):
        assert pers(q, S(2, -9), 3) == Fraction(1, 2)
    assert pers(4, S(2, -9), 3) == 0
    for q in (1, 4, 7, 25):
        assert pers(q, S(3, -16), 4) == Fraction(2, 3)


@pytest.mark.parametrize("delta,d,summands,q,e_hk,phi", [
    (3, [1, 1, 1], [S(2, -9)], 5, Fraction(9, 4), 55),
    (4, [1, 1, 1, 1], [S(3, -16)], 5, Fraction(8, 3), 65),
    (5, [1] * 5, [S(4, -25)], 3, Fraction(25, 8), 26),
])
def test_general_examples(delta, d, summands, q, e_hk, phi):
    got = hk_general(delta, d, summands, AutoZero(), q)
    assert got[0] == e_hk and got[1] == phi


def test_semistable_examples():
    assert hk_semistable(3, [1, 1, 1], AutoZero(), 7)[1] == 109
    assert hk_semistable(3, [1, 1, 1], AutoZero(), 1)[1] == 1
    assert hk_semistable(4, [1, 1, 1, 1], AutoZero(), 2)[1] == 9


def test_complete_embedding_examples():
    assert hk_complete_embedding(2, 25, 5)[1] == 1405
    assert hk_complete_embedding(4, 3, 3)[1] == 26
    assert hk_complete_embedding(2, 4, 2, h1_value=2)[1] == 36
    assert hk_complete_embedding(2, 4, 2, h1_value=1)[1] == 35
    with pytest.raises(H1Unresolved):
        hk_complete_embedding(2, 2, 2)
    with pytest.raises(NotPPower):
        hk_complete_embedding(3, 6, 5)


def test_space_curve_examples():
    case = SplittingCase.indecomposable(5)
    assert hk_space_curve(5, case, 5, 5)[1] == 82
    assert hk_space_curve(6, SplittingCase.indecomposable(6), 5, 5)[1] == 99
    lines = SplittingCase("iii", (S(1, -6), S(1, -5), S(1, -5)))
    assert hk_space_curve(4, lines, 5, 5)[0] == Fraction(11, 4)
    assert hk_space_curve(9, SplittingCase.indecomposable(9), 5, 5)[0] == 6
    with pytest.raises(H1Unresolved):
        hk_space_curve(5, case, 3, 3)


def test_decomposition_checks():
    with pytest.raises(DecompositionInconsistent):
        hk_general(3, [1, 1, 1], [S(2, -8)], AutoZero(), 5)
    with pytest.raises(DecompositionInconsistent):
        hk_general(3, [1, 1, 1], [S(1, -9)], AutoZero(), 5)
    with pytest.raises(DecompositionInconsistent):
        SplittingCase("ii", (S(1, -8), S(1, -8), S(1, -4)))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 8), st.lists(st.integers(1, 3), min_size=2, max_size=4), st.data(),
       st.sampled_from([1, 2, 3, 4, 5, 7, 8, 9, 25]))
def test_consistent_inputs_give_integral_lengths(delta, d, data, q):
    n = len(d)
    total = -delta * sum(d)
    degs = [data.draw(st.integers(total - 5, 5)) for _ in range(n - 2)]
    summands = [S(1, x) for x in degs] + [S(1, total - sum(degs))]
    e_hk, phi, gamma = hk_general(delta, d, summands, Constant((0,) * len(summands)), q)
    assert phi.denominator == 1 and e_hk * q * q + gamma == phi


def test_h1_policies():
    summands = [S(2, -12)]
    assert Constant((3,)).h1_total(2, 4, summands) == 3
    assert Constant((3,)).h1_total(3, 4, [S(2, -9)]) == 0
    assert Constant((3,), by_q=((2, (1,)),)).h1_total(2, 4, summands) == 1
    calls = []

    def h1_of(q, m):
        calls.append((q, m))
        return 7

    pol = OracleBacked(h1_of)
    # nu = 12/(2*4) = 3/2, integral at q = 2 with twist 3
    assert pol.h1_total(2, 4, summands) == 7
    pol.h1_total(2, 4, summands)
    assert calls == [(2, 3)]
    # a summand of larger nu has negative degree at that twist and is subtracted
    # nu = 1 is integral, nu = 5/4 is not; S(2,-10)(1) has degree -2
    two = [S(1, -4), S(2, -10)]
    assert OracleBacked(lambda q, m: 10).h1_total(1, 4, two) == 10 - 2


def test_lower_bound_examples():
    assert ehk_lower_bound_check(7, [S(3, -28)]).equality
    three = ehk_lower_bound_check(3, [S(1, -4)] * 3)
    assert three.equality and three.holds
    strict = ehk_lower_bound_check(3, [S(1, -6), S(1, -3), S(1, -3)])
    assert strict.e_hk == 3 and not strict.equality and strict.holds


def test_gamma_cycle_of_formula():
    cyc = gamma_cycle(lambda q: hk_general(3, [1, 1, 1], [S(2, -9)], AutoZero(), q)[2], 5, e_max=6)
    assert cyc == (1, 1)
    # -q mod 5 runs through 3, 1, 2, 4 and t(1-t) alternates
    cyc = gamma_cycle(lambda q: hk_complete_embedding(5, q, 2)[2], 2, e_max=8)
    assert cyc == (1, 2)


# --- consistency with the general formula ---------------------------------------

PRIME_POWERS = [p**e for p in (2, 3, 5) for e in range(7)]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.lists(st.integers(1, 4), min_size=2, max_size=5),
       st.sampled_from(PRIME_POWERS), st.integers(0, 5))
def test_semistable_equals_general(delta, d, q, h1):
    pol = Constant((h1,))
    summand = S(len(d) - 1, -delta * sum(d))
    try:
        expect = hk_general(delta, d, [summand], pol, q)
    except NonIntegralLength:
        with pytest.raises(NonIntegralLength):
            hk_semistable(delta, d, pol, q)
        return
    assert hk_semistable(delta, d, pol, q) == expect


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("N", [2, 3, 4, 5, 8, 9])
def test_complete_embedding_equals_general(p, N):
    for e in range(7):
        q = p**e
        for h1 in (0, 1, 2):
            pol = Constant((h1,))
            expect = hk_general(N + 1, [1] * (N + 1), [S(N, -(N + 1) ** 2)], pol, q)
            assert hk_complete_embedding(N, q, p, h1_value=pol) == expect
            if q % N == 0:
                assert hk_complete_embedding(N, q, p, h1_value=h1) == expect


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 15), st.sampled_from(["i", "ii", "iii"]), st.data(), st.integers(0, 3))
def test_space_curve_equals_general(delta, case_name, data, h1):
    total = -4 * delta
    if case_name == "i":
        summands = (S(3, total),)
    elif case_name == "ii":
        a = data.draw(st.integers(total - 10, 10))
        summands = (S(2, a), S(1, total - a))
    else:
        a = data.draw(st.integers(total - 10, 10))
        b = data.draw(st.integers(total - 10, 10))
        summands = (S(1, a), S(1, b), S(1, total - a - b))
    case = SplittingCase(case_name, summands)
    pol = Constant((h1,) * len(summands))
    p = data.draw(st.sampled_from([2, 3, 5]))
    q = p ** data.draw(st.integers(0, 6))
    assert hk_space_curve(delta, case, q, p, pol) == hk_general(delta, [1, 1, 1, 1], list(summands), pol, q)


@settings(max_examples=500, deadline=None)
@given(st.integers(1, 30), st.lists(st.integers(-40, 10), min_size=2, max_size=2),
       st.sampled_from([(3,), (2, 1), (1, 1, 1)]))
def test_convexity_bound(delta, cuts, ranks):
    total = -4 * delta
    if len(ranks) == 1:
        degrees = [total]
    elif len(ranks) == 2:
        degrees = [cuts[0], total - cuts[0]]
    else:
        degrees = [cuts[0], cuts[1], total - cuts[0] - cuts[1]]
    check = ehk_lower_bound_check(delta, [S(r, d) for r, d in zip(ranks, degrees)])
    assert check.holds
