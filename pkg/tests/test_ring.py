from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqc.checks import check_closed_forms, check_ring_axioms
from orbiqc.exact import NovikovScalar
from orbiqc.ring import (
    EffectivityError,
    c_sequence,
    chen_ruan_table,
    companion_matrix,
    multiplication_table,
    p_matrix,
    presentation,
    r_entries,
    s_closed,
    sigma,
)
from orbiqc.sectors import OrbClass, Weights, basis

weights = st.lists(st.integers(1, 5), min_size=2, max_size=4).map(lambda t: Weights(tuple(t)))


def Q(e, c=1, L=1):
    return NovikovScalar({Fraction(e): Fraction(c)}, lattice=L)


def test_p11_matrix():
    m = p_matrix(Weights((1, 1)))
    assert m.entries == ((0, Q(1)), (1, 0))
    assert presentation(Weights((1, 1))).top_str() == "P^2 = Q"


def test_p112_fixture():
    w = Weights((1, 1, 2))
    assert s_closed(w, Fraction(1, 2)) == Fraction(1, 2)
    half = Q(Fraction(1, 2), Fraction(1, 2), 2)
    assert r_entries(w) == [1, 1, half, half]
    m = p_matrix(w)
    assert m.entry(0, 3) == half
    assert presentation(w).top_str() == "P^4 = 1/4*Q"


def test_p14_sigma():
    w = Weights((1, 4))
    assert c_sequence(w) == [0, 0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert [sigma(w, j) for j in range(1, 6)] == [1, 1, Fraction(1, 4), Fraction(1, 16), Fraction(1, 64)]


def test_s_closed_endpoints():
    w = Weights((2, 3))
    assert s_closed(w, 0) == 1
    assert s_closed(w, 1) == Fraction(1, 2**2 * 3**3)
    with pytest.raises(ValueError):
        s_closed(w, Fraction(3, 2))


def test_sigma_index_range():
    with pytest.raises(IndexError):
        sigma(Weights((1, 1)), 3)


@given(weights)
@settings(max_examples=60, deadline=None)
def test_closed_forms(w):
    assert check_closed_forms(w) == []


@given(weights)
@settings(max_examples=40, deadline=None)
def test_companion_conjugates_to_standard(w):
    C = companion_matrix(w)
    corner = C.entry(0, w.N - 1)
    assert corner == Q(1, Fraction(1, prod(x**x for x in w.w)), w.L)
    assert C.to_standard().entries == p_matrix(w).entries


def test_p112_products():
    w = Weights((1, 1, 2))
    T = multiplication_table(w)
    CR = chen_ruan_table(w)
    e = basis(w)
    P2 = OrbClass.from_basis(w, e[2])
    assert CR.product(3, 3) == P2
    assert T.product(3, 3) == P2
    assert T.product(2, 2) == OrbClass.from_basis(w, e[0], Q(1, Fraction(1, 4)))
    # P^2 o 1_{1/2} = 1/2 Q^{1/2} P
    assert T.product(2, 3) == OrbClass.from_basis(w, e[1], Q(Fraction(1, 2), Fraction(1, 2), 2))


def test_effectivity_guard():
    from orbiqc.ring import _power_class

    with pytest.raises(EffectivityError):
        _power_class(Weights((1, 1)), 0, NovikovScalar({-1: 1}, allows_negative=True))


@pytest.mark.parametrize("ws", [(1, 1), (1, 2), (1, 1, 2), (2, 3), (1, 2, 3), (1, 1, 1, 3)])
def test_ring_axioms_small(ws):
    assert check_ring_axioms(Weights(ws)) == []


@given(st.permutations([1, 2, 2, 3]))
@settings(max_examples=10, deadline=None)
def test_permutation_invariance(perm):
    a, b = Weights(tuple(perm)), Weights((1, 2, 2, 3))
    assert p_matrix(a).entries == p_matrix(b).entries
    assert [str(e) for e in basis(a)] == [str(e) for e in basis(b)]


def test_latex_matrix():
    tex = p_matrix(Weights((1, 1))).to_latex()
    assert tex == "\\begin{pmatrix}\n0 & Q \\\\\n1 & 0\n\\end{pmatrix}"
    assert "(Qe^{t})^{1/2}" in p_matrix(Weights((1, 1, 2))).to_latex(symbolic_t=True)
