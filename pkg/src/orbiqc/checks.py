"""Corpus definitions and exact invariant checks used by ``orbiqc verify``.

Each check returns a list of human-readable failure strings; an empty list
means every identity held exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod

from .exact import NovikovScalar, SectorPoly
from .intersections import (
    CY3_FIXTURES,
    CIData,
    mirror_hypothesis,
    k_invariants,
    k_bound_violations,
    terminal_check,
)
from .jfunction import (
    DerivationError,
    DerivationMismatch,
    extract_v,
    j_series,
    matrix_from_j,
    pf_check,
)
from .ring import (
    c_sequence,
    chen_ruan_table,
    multiplication_table,
    p_matrix,
    presentation,
    r_entries,
    s_closed,
    sigma,
)
from .sectors import OrbClass, Weights, basis, orbifold_degree, pair_classes, sector_for

CORPORA = ("small", "standard")


def weight_corpus(max_sum: int = 10, lengths=(2, 3, 4), ordered: bool = True) -> list[Weights]:
    """Weight vectors with the given lengths and ``sum <= max_sum``.

    ``ordered`` keeps every permutation; otherwise only sorted tuples.
    """
    out = []
    for n in lengths:
        for t in itertools.product(range(1, max_sum + 1), repeat=n):
            if sum(t) <= max_sum and (ordered or list(t) == sorted(t)):
                out.append(Weights(t))
    return out


def corpus(name: str) -> list[Weights]:
    if name == "small":
        return weight_corpus(6, ordered=False)
    if name == "standard":
        return weight_corpus(10, ordered=True)
    raise ValueError(f"unknown corpus {name!r}; choose from {', '.join(CORPORA)}")


def expected_v(w: Weights, j: int) -> OrbClass:
    """``sigma_j P^(r_j) 1_(c_j)`` with ``r_j`` the repeat count of ``c_j``."""
    c = c_sequence(w)
    cj = c[j - 1]
    r = sum(1 for x in c[: j - 1] if x == cj)
    s = sector_for(w, cj)
    coeff = NovikovScalar.constant(sigma(w, j), w.L)
    return OrbClass(w, {s: SectorPoly.monomial(s.dim, coeff, r)})


def check_j(w: Weights, cap=3) -> list[str]:
    J = j_series(w, cap)
    bad = [f"{w}: PF residual at d={r.degree}" for r in pf_check(w, J).failures()]
    try:
        matrix_from_j(w, J)
    except (DerivationError, DerivationMismatch) as exc:
        bad.append(f"{w}: {exc}")
    for j in range(1, w.N + 1):
        try:
            if extract_v(w, j, J) != expected_v(w, j):
                bad.append(f"{w}: v_{j} differs from sigma_j P^r_j 1_c_j")
        except DerivationError as exc:
            bad.append(f"{w}: {exc}")
    return bad


def check_closed_forms(w: Weights) -> list[str]:
    bad = []
    c = c_sequence(w)
    for j in range(1, w.N + 1):
        if sigma(w, j) != s_closed(w, c[j - 1]):
            bad.append(f"{w}: sigma_{j} != s(c_{j})")
    top = NovikovScalar({1: Fraction(1, prod(x**x for x in w.w))}, lattice=w.L)
    total = NovikovScalar.one(w.L)
    for r in r_entries(w):
        total = total * r
    if total != top:
        bad.append(f"{w}: product of r_i is {total}, expected {top}")
    pres = presentation(w)
    if pres.chained() != pres.top_relation or pres.top_relation != top:
        bad.append(f"{w}: telescoped P^N relation is {pres.chained()}")
    return bad


def _grading_ok(w: Weights, a, b, prod_class: OrbClass) -> bool:
    lhs = orbifold_degree(a) + orbifold_degree(b)
    for e, coeff in prod_class.terms():
        for q, _ in coeff.terms:
            if q < 0 or lhs != orbifold_degree(e) + 2 * w.N * q:
                return False
    return True


def check_ring_axioms(w: Weights, associativity: bool = True) -> list[str]:
    """Commutation with ``P o``, associativity, Frobenius, effectivity, grading."""
    bad = []
    T = multiplication_table(w)
    CR = chen_ruan_table(w)
    els = basis(w)
    n = len(els)
    M = p_matrix(w)
    P = T.element(1)
    one = T.element(0)
    for b in range(n):
        col = OrbClass.from_coordinates(w, M.column(b))
        if T.product(1, b) != col:
            bad.append(f"{w}: table P o e_{b} disagrees with the P-matrix")
        if T.product(0, b) != T.element(b):
            bad.append(f"{w}: 1_0 is not a unit on e_{b}")
    for a in range(n):
        ea = T.element(a)
        for b in range(n):
            eb = T.element(b)
            ab = T.product(a, b)
            if T.multiply(ea, eb) != T.multiply(eb, ea):
                bad.append(f"{w}: e_{a} e_{b} not commutative")
            # P o (a o b) = (P o a) o b ties the table to the closed-form matrix
            if T.multiply(P, ab) != T.multiply(T.multiply(P, ea), eb):
                bad.append(f"{w}: P o (e_{a} e_{b}) != (P o e_{a}) e_{b}")
            if not _grading_ok(w, els[a], els[b], ab):
                bad.append(f"{w}: e_{a} e_{b} breaks the grading or has negative Q-power")
            if not _grading_ok(w, els[a], els[b], CR.product(a, b)):
                bad.append(f"{w}: Chen-Ruan e_{a} e_{b} breaks the grading")
            if pair_classes(T.multiply(P, ea), eb) != pair_classes(ea, T.multiply(P, eb)):
                bad.append(f"{w}: P o is not self-adjoint on (e_{a}, e_{b})")
            if associativity:
                for c in range(n):
                    ec = T.element(c)
                    if T.multiply(ab, ec) != T.multiply(ea, T.product(b, c)):
                        bad.append(f"{w}: associativity fails on ({a},{b},{c})")
                    if pair_classes(ab, ec) != pair_classes(ea, T.product(b, c)):
                        bad.append(f"{w}: Frobenius fails on ({a},{b},{c})")
    if T.multiply(one, P) != P:
        bad.append(f"{w}: unit")
    return bad


def check_weights(w: Weights, cap=3, ring_axioms: bool = True) -> list[str]:
    bad = check_j(w, cap) + check_closed_forms(w)
    if ring_axioms:
        bad += check_ring_axioms(w)
    return bad


def check_ci(ci: CIData) -> list[str]:
    bad = []
    try:
        k_invariants(ci)
    except ArithmeticError as exc:
        bad.append(f"{ci}: {exc}")
        return bad
    if not mirror_hypothesis(ci).verdict:
        bad.append(f"{ci}: mirror hypothesis fails at f in {mirror_hypothesis(ci).failing()}")
    if ci.quasismooth_assumed:
        if not terminal_check(ci).verdict:
            bad.append(f"{ci}: not terminal at f in {terminal_check(ci).failing()}")
        if ci.k_X <= 0 and k_bound_violations(ci):
            bad.append(f"{ci}: k_f exceeds its bound f*k_X")
    return bad


def ci_fixtures() -> list[CIData]:
    return list(CY3_FIXTURES.values())
