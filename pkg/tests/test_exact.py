from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqc.exact import (
    NovikovScalar,
    SectorPoly,
    ZLaurent,
    expand_reciprocal_factor,
    format_rational,
    parse_rational,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def novikov(draw, lattice=None):
    L = lattice or draw(st.sampled_from([1, 2, 3, 4, 6, 12]))
    terms = draw(st.dictionaries(st.integers(0, 3 * L), fractions, max_size=4))
    return NovikovScalar({Fraction(k, L): c for k, c in terms.items()}, lattice=L)


def test_rational_text_round_trip():
    for x in [Fraction(0), Fraction(-3, 7), Fraction(5)]:
        assert parse_rational(format_rational(x)) == x
    assert format_rational(Fraction(1, 2)) == "1/2"


def test_novikov_rendering():
    L = 2
    assert str(NovikovScalar({Fraction(1, 2): Fraction(1, 2)}, lattice=L)) == "1/2*Q^(1/2)"
    assert str(NovikovScalar({1: 1})) == "Q"
    assert str(NovikovScalar({2: 3, 0: -1})) == "-1 + 3*Q^2"
    assert str(NovikovScalar.zero()) == "0"


def test_lattice_alignment():
    a = NovikovScalar({Fraction(1, 2): 1})
    b = NovikovScalar({Fraction(1, 3): 1})
    c = a * b
    assert c.lattice == 6
    assert c.coefficient(Fraction(5, 6)) == 1
    assert NovikovScalar({1: 1}, lattice=1) == NovikovScalar({1: 1}, lattice=4)


def test_negative_exponent_refused():
    with pytest.raises(ValueError):
        NovikovScalar({-1: 1})
    x = NovikovScalar({-1: 1}, allows_negative=True)
    with pytest.raises(ValueError):
        x.effective()
    assert (x * NovikovScalar({1: 1})).effective() == 1


def test_off_lattice_exponent_rejected():
    with pytest.raises(ValueError):
        NovikovScalar({Fraction(1, 3): 1}, lattice=2)


@given(novikov(), novikov(), novikov())
@settings(max_examples=60, deadline=None)
def test_novikov_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(novikov())
@settings(max_examples=60, deadline=None)
def test_novikov_parse_inverts_str(a):
    assert NovikovScalar.parse(str(a), lattice=a.lattice) == a


@given(novikov(lattice=2))
@settings(max_examples=40, deadline=None)
def test_truncated_inverse(a):
    a = a + 1 - a.constant_term()
    inv = a.inverse_truncated(3)
    assert (a * inv).truncate(3) == 1


def test_zlaurent_arithmetic_and_parse():
    x = ZLaurent({1: 1, -2: Fraction(-5, 2)})
    assert ZLaurent.parse(str(x)) == x
    assert (x * ZLaurent.monomial(2, -1)).coefficient(0) == 2
    assert x.shift(3).max_power() == 4


def test_sector_poly_truncation():
    P = SectorPoly.monomial(2, Fraction(1), 1)
    assert (P * P * P).is_zero()
    assert (P * P).coefficient(2) == 1
    with pytest.raises(ValueError):
        SectorPoly(2, [1, 2])
    with pytest.raises(ValueError):
        P + SectorPoly.constant(1, Fraction(1))


@pytest.mark.parametrize("w,b,cap", [(1, 1, 2), (2, Fraction(1, 2), 3), (3, Fraction(5, 3), 1)])
def test_reciprocal_expansion_inverts_linear_factor(w, b, cap):
    inv = expand_reciprocal_factor(w, b, cap)
    lin = SectorPoly.linear(cap, ZLaurent.monomial(b, 1), ZLaurent.monomial(w, 0))
    assert lin * inv == SectorPoly.constant(cap, ZLaurent.one())


def test_reciprocal_expansion_rejects_bad_input():
    with pytest.raises(ValueError):
        expand_reciprocal_factor(1, 0, 2)
    with pytest.raises(ValueError):
        expand_reciprocal_factor(0, 1, 2)
