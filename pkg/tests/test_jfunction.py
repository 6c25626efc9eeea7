from fractions import Fraction
from math import ceil

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqc.checks import expected_v
from orbiqc.exact import NovikovScalar, SectorPoly, ZLaurent
from orbiqc.jfunction import (
    DerivationMismatch,
    JSeries,
    apply_Dj,
    degrees,
    denominator_factors,
    extract_corner,
    extract_v,
    j_series,
    matrix_from_j,
    pf_check,
)
from orbiqc.ring import p_matrix
from orbiqc.sectors import OrbClass, Weights, basis, frac, in_F, sector_for

Pz, zz = sp.symbols("P z")
weights = st.lists(st.integers(1, 4), min_size=2, max_size=4).map(lambda t: Weights(tuple(t)))


def sympy_term(w, d):
    """Independent expansion of z / prod (w_i P + b z) modulo P^(dim+1)."""
    dim = sector_for(w, frac(d)).dim
    expr = zz
    for x in w.w:
        b = frac(d * x) or Fraction(1)
        while b <= d * x:
            expr = expr / (x * Pz + sp.Rational(b.numerator, b.denominator) * zz)
            b += 1
    out = []
    for p in range(dim + 1):
        c = sp.expand(sp.cancel(sp.diff(expr, Pz, p).subs(Pz, 0) / sp.factorial(p)))
        terms = {}
        for mono in sp.Add.make_args(c):
            if mono == 0:
                continue
            coeff, e = mono.as_coeff_exponent(zz)
            terms[int(e)] = Fraction(int(sp.numer(coeff)), int(sp.denom(coeff)))
        out.append(ZLaurent(terms))
    return SectorPoly(dim, out)


def test_denominator_examples():
    assert denominator_factors(Weights((1, 1)), 1).factors == ((1, 1), (1, 1))
    half = Fraction(1, 2)
    assert denominator_factors(Weights((1, 1, 2)), half).factors == ((1, half), (1, half), (2, 1))
    assert denominator_factors(Weights((2, 3)), 0).factors == ()
    with pytest.raises(ValueError):
        denominator_factors(Weights((1, 2)), Fraction(1, 3))


@given(weights, st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_denominator_count(w, k):
    for f in {Fraction(i, x) for x in w.w for i in range(x)}:
        d = k + f
        assert len(denominator_factors(w, d)) == sum(ceil(d * x) for x in w.w)


def test_degree_support():
    w = Weights((2, 3))
    ds = degrees(w, 1)
    assert ds == [0, Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1]
    assert all(in_F(w, frac(d)) for d in degrees(w, 3))


def test_fixture_terms():
    J = j_series(Weights((1, 1)), 1)
    assert J.term(0).poly == SectorPoly.constant(1, ZLaurent.monomial(1, 1))
    assert J.term(1).poly == SectorPoly(1, [ZLaurent({-1: 1}), ZLaurent({-2: -2})])
    J = j_series(Weights((1, 1, 2)), 1)
    t = J.term(Fraction(1, 2))
    assert t.sector.f == Fraction(1, 2)
    assert t.poly == SectorPoly(0, [ZLaurent({-2: 4})])


@given(weights, st.sampled_from([Fraction(1, 2), 1, Fraction(5, 3), 2]))
@settings(max_examples=30, deadline=None)
def test_terms_match_sympy(w, cap):
    J = j_series(w, cap)
    for t in J.terms:
        assert t.poly == sympy_term(w, t.degree)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_classical_j_function(k):
    w = Weights((1,) * k)
    J = j_series(w, 3)
    for d in range(4):
        expr = zz / sp.prod([(Pz + b * zz) ** k for b in range(1, d + 1)])
        for p in range(k):
            ours = J.term(d).poly.coefficient(p)
            theirs = sp.cancel(sp.diff(expr, Pz, p).subs(Pz, 0) / sp.factorial(p))
            got = sum(sp.Rational(c.numerator, c.denominator) * zz**e for e, c in ours.terms)
            assert sp.simplify(got - theirs) == 0


def test_pf_examples():
    rep = pf_check(Weights((1, 1)), j_series(Weights((1, 1)), 3))
    assert rep.passed and len(rep.results) == 4
    rep = pf_check(Weights((1, 1, 2)), j_series(Weights((1, 1, 2)), 1))
    assert rep.passed


def test_pf_detects_corruption():
    w = Weights((1, 2))
    J = j_series(w, 2)
    bad_terms = tuple(
        t if t.degree != 1 else type(t)(t.degree, t.sector, t.poly * 2) for t in J.terms
    )
    rep = pf_check(w, JSeries(w, J.degree_cap, bad_terms))
    assert not rep.passed
    assert {r.degree for r in rep.failures()} == {1, 2}


def test_dj_examples():
    w = Weights((1, 1, 2))
    J = j_series(w, 1)
    assert [(d.degree, d.poly) for d in apply_Dj(w, 1, J)] == [(t.degree, t.poly) for t in J.terms]
    d4 = {d.degree: d for d in apply_Dj(w, 4, J)}
    assert d4[Fraction(1, 2)].q_exponent == 0
    assert d4[0].q_exponent == Fraction(-1, 2)


def test_extract_v_examples():
    w = Weights((1, 1, 2))
    J = j_series(w, 1)
    e = basis(w)
    assert extract_v(w, 1, J) == OrbClass.from_basis(w, e[0])
    assert extract_v(w, 4, J) == OrbClass.from_basis(w, e[3], Fraction(1, 2))
    w = Weights((1, 1))
    assert extract_v(w, 2, j_series(w, 1)) == OrbClass.from_basis(w, basis(w)[1])


def test_corner_extraction():
    w = Weights((1, 1, 2))
    corner = extract_corner(w, j_series(w, 1))
    q = NovikovScalar({Fraction(1, 2): Fraction(1, 4)}, lattice=2)
    assert corner == OrbClass.from_basis(w, basis(w)[0], q)


@given(weights)
@settings(max_examples=40, deadline=None)
def test_two_derivations_agree(w):
    J = j_series(w, 1)
    assert matrix_from_j(w, J).entries == p_matrix(w).entries
    for j in range(1, w.N + 1):
        assert extract_v(w, j, J) == expected_v(w, j)


def test_matrix_from_j_reports_mismatch(monkeypatch):
    import orbiqc.jfunction as jf

    w = Weights((1, 2))
    real = jf.p_matrix

    def wrong(w):
        m = real(w)
        rows = list(m.entries)
        rows[1] = tuple(x * 2 for x in rows[1])
        return type(m)(m.weights, tuple(rows), m.basis)

    monkeypatch.setattr(jf, "p_matrix", wrong)
    with pytest.raises(DerivationMismatch):
        matrix_from_j(w, j_series(w, 1))


def test_series_too_short():
    w = Weights((1, 3))
    with pytest.raises(ValueError):
        extract_v(w, w.N, j_series(w, Fraction(1, 3)))
