from fractions import Fraction

import pytest

from hkelliptic.curves import get_curve
from hkelliptic.errors import InvalidInput, NoMultiplicity, NotPPower
from hkelliptic.oracle import (
    ColengthProfile,
    FrobeniusQuery,
    colength,
    detect_cycle,
    exact_sequence_defect,
    gamma_series,
    syzygy_dims,
)
from hkelliptic.polynomials import parse_poly


def maximal(name, q=1):
    curve = get_curve(name)
    return FrobeniusQuery(curve.presentation, curve.maximal_ideal(), q)


@pytest.mark.parametrize("name,q,total", [
    ("hesse:p5:l1", 5, 55),
    ("hesse:p5:l1", 1, 1),
    ("fermat:p2", 2, 8),
    ("fermat:p2", 4, 36),
    ("hesse:p2:lF8", 2, 7),
    ("ci-quartic:p2", 2, 9),
])
def test_colength_totals(name, q, total):
    assert colength(maximal(name, q)).total == total


def test_zero_colength_is_absorbing():
    prof = colength(maximal("hesse:p5:l1", 5), confirm_zeros=3)
    assert prof.per_degree[-1][1] == 0
    assert all(c > 0 for _, c in prof.per_degree[:-1])
    assert prof.stop_degree <= maximal("hesse:p5:l1", 5).stop_bound


def test_profile_round_trip_and_csv():
    prof = colength(maximal("fermat:p2", 4))
    assert ColengthProfile.from_json(prof.to_json()) == prof
    lines = prof.to_csv().splitlines()
    assert lines[0] == "q,m,dim_Rm,dim_Iq_m,colength"
    assert sum(int(line.split(",")[-1]) for line in lines[1:]) == 36


@pytest.mark.parametrize("name,e,m,h0", [
    ("fermat:p2", 1, 3, 1),
    ("hesse:p2:lF8", 1, 3, 0),
    ("hesse:p2:lF8", 2, 6, 1),
])
def test_quoted_syzygy_dimensions(name, e, m, h0):
    assert syzygy_dims(maximal(name, 2**e), m).h0 == h0


def test_riemann_roch_bookkeeping():
    dims = syzygy_dims(maximal("fermat:p2", 2), 3)
    assert dims.degree_of_bundle == 3 * (3 * 2 - 2 * 3)
    assert dims.h0 - dims.h1 == dims.degree_of_bundle


@pytest.mark.parametrize("name,q", [("hesse:p5:l1", 5), ("ci-quartic:p5", 5), ("hesse:p2:lF8", 4)])
def test_exact_sequence_identity(name, q):
    query = maximal(name, q)
    for m in range(0, query.stop_bound):
        assert exact_sequence_defect(query, m) == 0


def test_non_maximal_ideal():
    curve = get_curve("hesse:p5:l1")
    ideal = [parse_poly(t, curve.field, 3) for t in ("X0^2", "X1^2", "X2^2")]
    # (X^2,Y^2,Z^2) = (X,Y,Z)^[2]-like; colength counts are monotone in q
    a = colength(FrobeniusQuery(curve.presentation, ideal, 1)).total
    b = colength(FrobeniusQuery(curve.presentation, ideal, 5)).total
    assert 0 < a < b


def test_query_validation():
    curve = get_curve("hesse:p5:l1")
    with pytest.raises(NotPPower):
        FrobeniusQuery(curve.presentation, curve.maximal_ideal(), 4)
    with pytest.raises(InvalidInput):
        FrobeniusQuery(curve.presentation, [], 5)
    other = get_curve("fermat:p2")
    with pytest.raises(InvalidInput):
        FrobeniusQuery(curve.presentation, other.maximal_ideal(), 5)


def test_gamma_series_with_known_multiplicity():
    series = gamma_series(maximal("hesse:p5:l1"), [1, 2], e_hk=Fraction(9, 4))
    assert [g for _, _, g in series.values] == [Fraction(-5, 4)] * 2
    series = gamma_series(maximal("ci-quartic:p5"), [1, 2], e_hk=Fraction(8, 3))
    assert [g for _, _, g in series.values] == [Fraction(-5, 3)] * 2


def test_gamma_series_fits_multiplicity():
    series = gamma_series(maximal("fermat:p2"), [1, 2, 3])
    assert series.fitted and series.e_hk == Fraction(9, 4)
    assert [g for _, _, g in series.values] == [-1, 0, 0]
    assert series.cycle == (2, 1)
    with pytest.raises(NoMultiplicity):
        gamma_series(maximal("fermat:p2"), [1, 2])


def test_detect_cycle():
    assert detect_cycle([3, 1, 2, 1, 2]) == (1, 2)
    assert detect_cycle([5, 5, 5]) == (0, 1)
    assert detect_cycle([1, 2, 3]) is None
