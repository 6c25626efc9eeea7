"""Sector combinatorics, checked against brute force over roots of unity and
against a localization computation of the pairing."""

import random
from fractions import Fraction
from math import floor, lcm, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbiqc.sectors import (
    Weights,
    basis,
    frac,
    graph_space_dim,
    involution,
    orbifold_degree,
    pairing,
    sector_for,
    sector_set,
    virtual_dim,
)

weights = st.lists(st.integers(1, 6), min_size=2, max_size=4).map(lambda t: Weights(tuple(t)))


def brute_sectors(w):
    """Fractions f = k/L whose root of unity fixes some coordinate."""
    L = lcm(*w)
    out = {}
    for k in range(L):
        f = Fraction(k, L)
        fixed = [x for x in w if (f * x).denominator == 1]
        if fixed:
            out[f] = fixed
    return out


def localization_integral(u, m, rng):
    """Integral of P^m over P(u) by equivariant localization at random weights."""
    while True:
        lam = [Fraction(rng.randint(1, 997), rng.randint(1, 97)) for _ in u]
        # fixed points must be isolated: all lambda_i / u_i distinct
        if len({l / x for l, x in zip(lam, u)}) == len(u):
            break
    total = Fraction(0)
    for i, ui in enumerate(u):
        mu = lam[i] / ui
        den = prod((lam[j] - u[j] * mu for j in range(len(u)) if j != i), start=Fraction(1))
        total += Fraction(1, ui) * (-mu) ** m / den
    return total


def test_p112_fixture():
    w = Weights((1, 1, 2))
    secs = sector_set(w)
    assert [(s.f, s.dim, s.age) for s in secs] == [(0, 2, 0), (Fraction(1, 2), 0, 1)]
    assert secs[1].subweights == (2,)
    assert [str(e) for e in basis(w)] == ["1_0", "P*1_0", "P^2*1_0", "1_1/2"]


def test_p11_single_sector():
    secs = sector_set(Weights((1, 1)))
    assert len(secs) == 1 and secs[0].dim == 1


def test_weight_validation():
    with pytest.raises(ValueError, match="weights must be positive"):
        Weights((0, 1))
    with pytest.raises(ValueError):
        Weights.parse("1,x")
    with pytest.warns(UserWarning):
        Weights((3,))


@given(weights)
@settings(max_examples=80, deadline=None)
def test_sectors_match_brute_force(w):
    brute = brute_sectors(w.w)
    secs = sector_set(w)
    assert [s.f for s in secs] == sorted(brute)
    for s in secs:
        assert list(s.subweights) == brute[s.f]
        assert s.age == sum(frac(-x * s.f) for x in w.w)
    assert len(basis(w)) == w.N


@given(weights)
@settings(max_examples=80, deadline=None)
def test_age_involution(w):
    for s in sector_set(w):
        t = sector_for(w, involution(w, s.f))
        assert involution(w, t.f) == s.f
        assert t.dim == s.dim
        assert s.age + t.age == w.n - s.dim


def test_involution_rejects_non_sector():
    with pytest.raises(ValueError):
        involution(Weights((1, 2)), Fraction(1, 3))


@given(weights, st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_pairing_matches_localization(w, seed):
    rng = random.Random(seed)
    els = basis(w)
    for a in els:
        for b in els:
            v = pairing(w, a, b)
            if b.sector.f == frac(-a.sector.f) and a.p + b.p == a.sector.dim:
                assert v == localization_integral(a.sector.subweights, a.sector.dim, rng)
            else:
                assert v == 0
            assert v == pairing(w, b, a)


@given(weights)
@settings(max_examples=60, deadline=None)
def test_pairing_degree_sum(w):
    for a in basis(w):
        for b in basis(w):
            if pairing(w, a, b):
                assert orbifold_degree(a) + orbifold_degree(b) == 2 * w.n


def test_p1_pairing_example():
    w = Weights((1, 1))
    e0, e1 = basis(w)
    assert pairing(w, e0, e1) == 1 and pairing(w, e0, e0) == 0


@given(weights, st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_graph_space_dim(w, k):
    for s in sector_set(w):
        d = k + s.f
        if d == 0:
            continue
        dim = graph_space_dim(w, d)
        assert dim == w.n + sum(floor(d * x) for x in w.w)
        back = sector_for(w, frac(-d))
        assert dim == w.n + d * w.N - back.age


def test_virtual_dim_examples():
    w = Weights((1, 1))
    # P^1, genus 0, three untwisted points, degree 1: 2*3 - 4 + 4 = 6
    assert virtual_dim(w, 0, 3, 1, (0, 0, 0)) == 6
    w = Weights((1, 1, 2))
    assert virtual_dim(w, 0, 1, Fraction(1, 2), (1,)) == 2 - 2 + 4 - 2
    with pytest.raises(ValueError):
        virtual_dim(w, 0, 1, Fraction(1, 3))
    with pytest.raises(ValueError):
        graph_space_dim(w, 0)


def test_random_localization_is_independent_of_parameters():
    rng = random.Random(7)
    for u in [(1, 1), (1, 2, 3), (2, 2, 5)]:
        vals = {localization_integral(u, len(u) - 1, rng) for _ in range(3)}
        assert vals == {Fraction(1, prod(u))}
