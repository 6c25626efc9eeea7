"""Complete intersections X_{d_0,...,d_m} in P(w_0, ..., w_n).

Invariants ``k_X`` and ``k_f``, the hypergeometric I-function, the
z-expansion shape that determines the mirror map, and the terminal-
singularity classifiers.  Quasismoothness is never checked: it is an
input flag and every classifier verdict is conditional on it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial, gcd, prod
from typing import Sequence

from .exact import NovikovScalar, SectorPoly, ZLaurent, expand_reciprocal_factor
from .jfunction import JTerm, degrees, denominator_factors
from .sectors import Sector, Weights, frac, sector_for, sector_set

__all__ = [
    "CIData",
    "ISeries",
    "MirrorData",
    "ShapeError",
    "QuasismoothRequired",
    "k_invariants",
    "mirror_hypothesis",
    "i_series",
    "mirror_data",
    "terminal_check",
    "reid_tai",
    "is_well_formed_quotient",
    "k_bound_check",
    "k_bound_violations",
    "numerator_factors",
    "divide_pushforward",
    "s_closed_form",
    "local_singularity",
    "CY3_FIXTURES",
]


class ShapeError(ArithmeticError):
    """The I-function does not have the z-expansion its case predicts."""


class QuasismoothRequired(ValueError):
    """The classifier is only meaningful for quasismooth input."""


@dataclass(frozen=True)
class CIData:
    weights: Weights
    degrees: tuple[int, ...]
    quasismooth_assumed: bool = True
    name: str = ""

    def __post_init__(self):
        ds = tuple(self.degrees)
        if not ds:
            raise ValueError("at least one degree is required")
        for d in ds:
            if isinstance(d, bool) or not isinstance(d, int) or d < 1:
                raise ValueError(f"degrees must be positive integers, got {d!r}")
        object.__setattr__(self, "degrees", ds)

    @classmethod
    def of(cls, weights: Sequence[int], degrees: Sequence[int], quasismooth_assumed=True, name=""):
        return cls(Weights(tuple(weights)), tuple(degrees), quasismooth_assumed, name)

    @classmethod
    def parse(cls, row: str, quasismooth_assumed: bool = True) -> "CIData":
        """Parse ``"w0,...,wn;d0,...,dm"``."""
        try:
            ws, ds = row.strip().split(";")
            degs = tuple(int(x) for x in ds.replace(" ", "").split(",") if x)
        except ValueError:
            raise ValueError(f"malformed complete-intersection row {row!r}") from None
        return cls(Weights.parse(ws), degs, quasismooth_assumed)

    @classmethod
    def from_json(cls, data) -> "CIData":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            Weights(tuple(int(x) for x in data["weights"])),
            tuple(int(x) for x in data["degrees"]),
            bool(data.get("quasismooth_assumed", True)),
            str(data.get("name", "")),
        )

    def to_json(self) -> dict:
        return {
            "weights": list(self.weights.w),
            "degrees": list(self.degrees),
            "quasismooth_assumed": self.quasismooth_assumed,
            "name": self.name,
        }

    @property
    def m(self) -> int:
        return len(self.degrees) - 1

    @property
    def k_X(self) -> int:
        return sum(self.degrees) - sum(self.weights.w)

    def __str__(self):
        ds = ",".join(map(str, self.degrees))
        return f"X_{{{ds}}} in {self.weights}"


def _counts(ci: CIData, f: Fraction) -> tuple[int, int]:
    """(#{j: f d_j integral}, #{i: f w_i integral})."""
    cd = sum(1 for d in ci.degrees if (f * d).denominator == 1)
    cw = sum(1 for x in ci.weights.w if (f * x).denominator == 1)
    return cd, cw


def _k_ceil(ci: CIData, f: Fraction) -> int:
    return sum(ceil(f * d) for d in ci.degrees) - sum(ceil(f * x) for x in ci.weights.w)


def _k_frac(ci: CIData, f: Fraction) -> Fraction:
    return (
        ci.k_X * f
        + sum((frac(-f * d) for d in ci.degrees), Fraction(0))
        - sum((frac(-f * x) for x in ci.weights.w), Fraction(0))
    )


def k_invariants(ci: CIData) -> tuple[int, dict[Fraction, int]]:
    """``k_X`` and ``k_f`` for every sector index, from both closed forms."""
    out = {}
    for s in sector_set(ci.weights):
        a, b = _k_ceil(ci, s.f), _k_frac(ci, s.f)
        if a != b:
            raise ArithmeticError(f"k_f forms disagree at f={s.f}: {a} vs {b}")
        out[s.f] = a
    return ci.k_X, out


@dataclass(frozen=True)
class SectorVerdict:
    f: Fraction
    k_f: int
    count_degrees: int
    count_weights: int
    clauses: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return bool(self.clauses)


@dataclass(frozen=True)
class ClassifierReport:
    ci: CIData
    sectors: tuple[SectorVerdict, ...]
    conditional_on_quasismooth: bool = True

    @property
    def verdict(self) -> bool:
        return all(s.passed for s in self.sectors)

    def failing(self) -> list[Fraction]:
        return [s.f for s in self.sectors if not s.passed]


def mirror_hypothesis(ci: CIData) -> ClassifierReport:
    """For each twisted sector: ``k_f < -1`` or the integrality counts dominate."""
    _, ks = k_invariants(ci)
    rows = []
    for f, k in ks.items():
        if f == 0:
            continue
        cd, cw = _counts(ci, f)
        clauses = []
        if k < -1:
            clauses.append("k_f<-1")
        if cd >= cw:
            clauses.append("counts")
        rows.append(SectorVerdict(f, k, cd, cw, tuple(clauses)))
    return ClassifierReport(ci, tuple(rows), ci.quasismooth_assumed)


def terminal_check(ci: CIData) -> ClassifierReport:
    """Terminal criterion on weights and degrees, valid for quasismooth ``ci``.

    Each twisted ``f`` needs either the counts clause or
    ``sum <f w_i> > 1 + sum <f d_j>``.
    """
    if not ci.quasismooth_assumed:
        raise QuasismoothRequired("terminal_check needs quasismooth_assumed=True")
    _, ks = k_invariants(ci)
    rows = []
    for f, k in ks.items():
        if f == 0:
            continue
        cd, cw = _counts(ci, f)
        clauses = []
        if cd >= cw:
            clauses.append("counts")
        lhs = sum((frac(f * x) for x in ci.weights.w), Fraction(0))
        rhs = 1 + sum((frac(f * d) for d in ci.degrees), Fraction(0))
        if lhs > rhs:
            clauses.append("age")
        rows.append(SectorVerdict(f, k, cd, cw, tuple(clauses)))
    return ClassifierReport(ci, tuple(rows), True)


def is_well_formed_quotient(r: int, a: Sequence[int]) -> bool:
    """No quasi-reflections: dropping any one weight leaves ``hcf(r, rest) = 1``."""
    for i in range(len(a)):
        g = r
        for j, x in enumerate(a):
            if j != i:
                g = gcd(g, x)
        if g != 1:
            return False
    return True


@dataclass(frozen=True)
class ReidTaiReport:
    r: int
    a: tuple[int, ...]
    well_formed: bool
    failing_k: tuple[int, ...]

    @property
    def terminal(self) -> bool:
        return self.well_formed and not self.failing_k


def reid_tai(r: int, a: Sequence[int]) -> ReidTaiReport:
    """Terminality of the cyclic quotient ``1/r(a_1, ..., a_n)``."""
    if isinstance(r, bool) or not isinstance(r, int) or r < 2:
        raise ValueError("r must be an integer >= 2")
    a = tuple(int(x) % r for x in a)
    if not a:
        raise ValueError("at least one weight is required")
    bad = tuple(k for k in range(1, r) if sum(Fraction((k * x) % r, r) for x in a) <= 1)
    return ReidTaiReport(r, a, is_well_formed_quotient(r, a), bad)


@dataclass(frozen=True)
class KBoundRow:
    f: Fraction
    k_f: int
    bound: Fraction
    ok_bound: bool
    ok_strict: bool | None


def k_bound_check(ci: CIData) -> list[KBoundRow]:
    """``k_f <= f k_X`` on every sector, and ``k_f < 0`` for ``f != 0`` when ``k_X = 0``.

    Returns all rows; a row with a false flag is a violation.
    """
    if not ci.quasismooth_assumed:
        raise QuasismoothRequired("k_bound_check needs quasismooth_assumed=True")
    if ci.k_X > 0:
        raise ValueError("only meaningful for k_X <= 0")
    kX, ks = k_invariants(ci)
    rows = []
    for f, k in ks.items():
        strict = (k < 0) if (kX == 0 and f != 0) else None
        rows.append(KBoundRow(f, k, f * kX, k <= f * kX, strict))
    return rows


def k_bound_violations(ci: CIData) -> list[KBoundRow]:
    return [r for r in k_bound_check(ci) if not r.ok_bound or r.ok_strict is False]


@dataclass(frozen=True)
class LocalQuotient:
    r: int
    weights: tuple[int, ...]
    zeros: int

    @property
    def terminal(self) -> bool:
        nz = tuple(x for x in self.weights if x % self.r)
        return reid_tai(self.r, nz).terminal if nz else False

    def __str__(self):
        return f"1/{self.r}(" + ",".join(map(str, self.weights)) + ")"


def local_singularity(ci: CIData, f, matching: dict[int, int]) -> LocalQuotient | None:
    """Transverse quotient singularity along the locus fixed by ``e^(2 pi i f)``.

    ``matching`` pairs degree indices ``j`` (with ``f d_j`` not integral) to
    weight indices ``i`` whose coordinate the ``j``-th equation eliminates.
    Those weights are dropped; the rest of the non-integral ones, reduced
    mod ``r``, give the quotient, padded with ``c`` zeros.  ``None`` when the
    locus is empty (``c <= 0``).
    """
    f = Fraction(f)
    r = f.denominator
    cd, cw = _counts(ci, f)
    c = cw - cd
    if c <= 0:
        return None
    used = set()
    for j, i in matching.items():
        if (f * ci.degrees[j]).denominator == 1:
            raise ValueError(f"degree index {j} is integral at f={f}")
        if (f * ci.weights.w[i]).denominator == 1:
            raise ValueError(f"weight index {i} is integral at f={f}")
        if i in used:
            raise ValueError(f"weight index {i} matched twice")
        used.add(i)
    rest = tuple(
        x % r
        for i, x in enumerate(ci.weights.w)
        if (f * x).denominator != 1 and i not in used
    )
    return LocalQuotient(r, (0,) * c + rest, c)


CY3_FIXTURES: dict[str, CIData] = {
    "X5": CIData.of((1, 1, 1, 1, 1), (5,), name="X5"),
    "X6": CIData.of((1, 1, 1, 1, 2), (6,), name="X6"),
    "X8": CIData.of((1, 1, 1, 1, 4), (8,), name="X8"),
    "X10": CIData.of((1, 1, 1, 2, 5), (10,), name="X10"),
    "X7": CIData.of((1, 1, 1, 1, 1, 2), (7,), name="X7"),
}


# -- I-function ----------------------------------------------------------


def numerator_factors(ci: CIData, d) -> tuple[tuple[int, Fraction], ...]:
    """Pairs ``(d_j, b)`` with ``<b> = <d d_j>``, ``0 <= b <= d d_j``."""
    d = Fraction(d)
    out = []
    for dj in ci.degrees:
        top = d * dj
        b = frac(top)
        while b <= top:
            out.append((dj, b))
            b += 1
    return tuple(out)


@dataclass(frozen=True)
class ISeries:
    ci: CIData
    degree_cap: Fraction
    terms: tuple[JTerm, ...]

    def term(self, d) -> JTerm | None:
        d = Fraction(d)
        for t in self.terms:
            if t.degree == d:
                return t
        return None

    def degrees(self) -> list[Fraction]:
        return [t.degree for t in self.terms]


def _i_term(ci: CIData, d: Fraction) -> JTerm:
    s = sector_for(ci.weights, frac(d))
    cap = s.dim
    poly = SectorPoly.constant(cap, ZLaurent.monomial(1, 1))
    for dj, b in numerator_factors(ci, d):
        poly = poly * SectorPoly.linear(cap, ZLaurent.monomial(b, 1), ZLaurent.monomial(dj, 0))
        if poly.is_zero():
            return JTerm(d, s, poly)
    for x, b in denominator_factors(ci.weights, d).factors:
        poly = poly * expand_reciprocal_factor(x, b, cap)
    return JTerm(d, s, poly)


def i_series(ci: CIData, cap=3) -> ISeries:
    """Terms of the I-function at ``t = 0`` through Q-degree ``cap``."""
    cap = Fraction(cap)
    return ISeries(ci, cap, tuple(_i_term(ci, d) for d in degrees(ci.weights, cap)))


def divide_pushforward(ci: CIData, poly: SectorPoly) -> SectorPoly:
    """Exact division of an untwisted class by ``prod_j (d_j P)``.

    The quotient lives modulo ``P^(n-m)``, the ambient part of ``H(X)``.
    """
    n, m = ci.weights.n, ci.m
    if m + 1 > n:
        raise ShapeError("pushforward class vanishes in the truncated ring; division is ambiguous")
    k = m + 1
    for p in range(k):
        if poly.coeffs[p]:
            raise ShapeError(f"coefficient of P^{p} is nonzero; not divisible by prod d_j P")
    c = Fraction(1, prod(ci.degrees))
    return SectorPoly(n - k, [x * c for x in poly.coeffs[k:]])


@dataclass(frozen=True)
class MirrorData:
    case: str
    degree_cap: int
    F: NovikovScalar
    g: NovikovScalar
    s: NovikovScalar | None
    tau: NovikovScalar
    hypotheses_hold: bool
    twisted_residuals: tuple[tuple[Fraction, int], ...] = field(default=())

    @property
    def shape_ok(self) -> bool:
        return not self.twisted_residuals


def mirror_data(ci: CIData, I: ISeries | None = None) -> MirrorData:
    """Read off ``F``, ``g`` (or ``s``) and ``tau = g/F`` at ``t = 0``.

    Untwisted terms are divided by the pushforward class and split by
    power of ``z``.  Twisted terms must be ``O(z^-1)``; if the
    hypotheses fail the offending coefficients are reported
    in ``twisted_residuals`` instead of raising.
    """
    kX = ci.k_X
    if kX > 0:
        raise ValueError("mirror data requires k_X <= 0")
    if I is None:
        I = i_series(ci, 3)
    hyp = mirror_hypothesis(ci).verdict
    L = ci.weights.L
    cap = int(I.degree_cap)
    Fc: dict[int, Fraction] = {}
    gc: dict[int, Fraction] = {}
    s0: dict[int, Fraction] = {}
    residuals = []
    for t in I.terms:
        if t.sector.f != 0:
            for z in sorted({z for c in t.poly.coeffs for z, _ in c.terms}):
                if z >= 0:
                    residuals.append((t.degree, z))
            continue
        d = int(t.degree)
        q = divide_pushforward(ci, t.poly)
        for p, coeff in enumerate(q.coeffs):
            for z, c in coeff.terms:
                if z > 1 or (z == 1 and p > 0):
                    raise ShapeError(f"degree {d}: unexpected z^{z} P^{p} term")
                if z == 1:
                    Fc[d] = c
                elif z == 0:
                    if p == 1:
                        gc[d] = c
                    elif p == 0 and kX == -1:
                        s0[d] = c
                    else:
                        raise ShapeError(f"degree {d}: unexpected z^0 P^{p} term")
    residuals = tuple(residuals)
    if residuals and hyp:
        raise ShapeError(f"twisted sectors contribute at z^>=0: {residuals}")
    F = NovikovScalar(Fc, lattice=L)
    g = NovikovScalar(gc, lattice=L)
    if F.constant_term() != 1:
        raise ShapeError("F must start with 1")
    if kX < -1:
        case = "k<-1"
        if not F.is_constant() or g:
            raise ShapeError("no mirror correction expected when k_X < -1")
        return MirrorData(case, cap, F, g, None, NovikovScalar.zero(L), hyp, residuals)
    if kX == -1:
        case = "k=-1"
        if not F.is_constant() or g:
            raise ShapeError("expected I = z + s(t) + O(1/z) when k_X = -1")
        s = NovikovScalar(s0, lattice=L)
        return MirrorData(case, cap, F, g, s, NovikovScalar.zero(L), hyp, residuals)
    tau = (g * F.inverse_truncated(cap)).truncate(cap)
    return MirrorData("k=0", cap, F, g, None, tau, hyp, residuals)


def s_closed_form(ci: CIData) -> NovikovScalar:
    """``Q prod d_j! / prod w_i!`` (the k_X = -1 correction at t = 0)."""
    c = Fraction(prod(factorial(d) for d in ci.degrees), prod(factorial(x) for x in ci.weights.w))
    return NovikovScalar({1: c}, lattice=ci.weights.L)
