"""Small J-function of P(w_0, ..., w_n) and the ring it determines.

Series are kept at ``t = 0``.  The operator ``z d/dt`` acts on the
degree-``d`` summand as multiplication by ``P + d z`` (it hits
``e^{Pt/z} e^{dt}``), so no series in ``t`` is ever materialised.

Each term is stored as a :class:`SectorPoly` over :class:`ZLaurent` in the
cohomology ring of the sector ``<d>``; the factor ``Q^d`` is implicit in
the degree key.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .exact import NovikovScalar, SectorPoly, ZLaurent, expand_reciprocal_factor
from .ring import QuantumMatrix, c_sequence, p_matrix
from .sectors import OrbClass, Sector, Weights, basis, frac, in_F, sector_for, sector_set

__all__ = [
    "JTerm",
    "JSeries",
    "DenominatorSpec",
    "degrees",
    "denominator_factors",
    "j_series",
    "PFReport",
    "pf_check",
    "apply_Dj",
    "extract_v",
    "extract_corner",
    "matrix_from_j",
    "DerivationError",
    "DerivationMismatch",
]


class DerivationError(ArithmeticError):
    """A coefficient extraction picked up contributions it should not have."""


class DerivationMismatch(ArithmeticError):
    """The series-derived ring disagrees with the closed form."""


@dataclass(frozen=True)
class DenominatorSpec:
    """Linear factors ``(w_i P + b z)`` of the degree-``d`` denominator."""

    degree: Fraction
    factors: tuple[tuple[int, Fraction], ...]

    def __len__(self):
        return len(self.factors)


def degrees(w: Weights, cap) -> list[Fraction]:
    """All ``d = k + f <= cap`` with ``k >= 0`` and ``f`` a sector index."""
    cap = Fraction(cap)
    if cap < 0:
        raise ValueError("degree cap must be non-negative")
    out = []
    for k in range(floor(cap) + 1):
        for s in sector_set(w):
            d = k + s.f
            if d <= cap:
                out.append(d)
    return sorted(out)


def denominator_factors(w: Weights, d) -> DenominatorSpec:
    d = Fraction(d)
    if d < 0:
        raise ValueError("degree must be non-negative")
    if not in_F(w, frac(d)):
        raise ValueError(f"<{d}> is not a sector index of {w}")
    factors = []
    for x in w.w:
        top = d * x
        b = frac(top) or Fraction(1)
        while b <= top:
            factors.append((x, b))
            b += 1
    return DenominatorSpec(d, tuple(factors))


def _linear(cap: int, p_coeff, z_coeff) -> SectorPoly:
    """``p_coeff * P + z_coeff * z`` in a sector ring."""
    return SectorPoly.linear(cap, ZLaurent.monomial(z_coeff, 1), ZLaurent.monomial(p_coeff, 0))


@dataclass(frozen=True)
class JTerm:
    degree: Fraction
    sector: Sector
    poly: SectorPoly

    def z_coefficient(self, k: int) -> list[Fraction]:
        """Coefficient of ``z^k`` as a list indexed by the power of ``P``."""
        return [c.coefficient(k) for c in self.poly.coeffs]


@dataclass(frozen=True)
class JSeries:
    weights: Weights
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


def _j_term(w: Weights, d: Fraction) -> JTerm:
    s = sector_for(w, frac(d))
    poly = SectorPoly.constant(s.dim, ZLaurent.monomial(1, 1))
    for x, b in denominator_factors(w, d).factors:
        poly = poly * expand_reciprocal_factor(x, b, s.dim)
    return JTerm(d, s, poly)


def j_series(w: Weights, cap=3) -> JSeries:
    """Terms of the small J-function through Q-degree ``cap`` at ``t = 0``."""
    cap = Fraction(cap)
    return JSeries(w, cap, tuple(_j_term(w, d) for d in degrees(w, cap)))


@dataclass(frozen=True)
class PFResult:
    degree: Fraction
    passed: bool
    residual: SectorPoly


@dataclass(frozen=True)
class PFReport:
    weights: Weights
    results: tuple[PFResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[PFResult]:
        return [r for r in self.results if not r.passed]


def pf_check(w: Weights, J: JSeries) -> PFReport:
    """Check the hypergeometric differential equation degree by degree.

    On the degree-``d`` summand the operator
    ``prod_i prod_{k<w_i} (w_i z d/dt - k z)`` becomes
    ``prod (w_i P + (d w_i - k) z)``; it must carry ``T_d`` to ``T_{d-1}``
    (zero below degree 1).
    """
    results = []
    for t in J.terms:
        cap = t.sector.dim
        lhs = t.poly
        for x in w.w:
            for k in range(x):
                lhs = lhs * _linear(cap, x, t.degree * x - k)
        prev = J.term(t.degree - 1) if t.degree >= 1 else None
        if prev is None and t.degree >= 1:
            raise ValueError(f"series is missing degree {t.degree - 1}")
        residual = lhs - prev.poly if prev is not None else lhs
        results.append(PFResult(t.degree, residual.is_zero(), residual))
    return PFReport(w, tuple(results))


@dataclass(frozen=True)
class DTerm:
    """Degree-``d`` summand of ``D_j J``; carries ``Q^(q_exponent)``."""

    degree: Fraction
    sector: Sector
    q_exponent: Fraction
    poly: SectorPoly


def apply_Dj(w: Weights, j: int, J: JSeries) -> list[DTerm]:
    """``D_j J`` per degree: ``T_d * prod_{m<j} (P + (d - c_m) z)``, Q shifted by ``-c_j``."""
    c = c_sequence(w)
    if not 1 <= j <= len(c):
        raise IndexError(f"j must be in 1..{len(c)}")
    cj = c[j - 1]
    if J.degree_cap < cj:
        raise ValueError(f"series stops below degree {cj}")
    out = []
    for t in J.terms:
        poly = t.poly
        for cm in c[: j - 1]:
            poly = poly * _linear(t.sector.dim, 1, t.degree - cm)
            if poly.is_zero():
                break
        out.append(DTerm(t.degree, t.sector, t.degree - cj, poly))
    return out


def _collect(w: Weights, parts: list[tuple[DTerm, list[Fraction]]]) -> OrbClass:
    out = OrbClass.zero(w)
    for dt, coeffs in parts:
        novs = [NovikovScalar({dt.q_exponent: c}, lattice=w.L, allows_negative=True) for c in coeffs]
        out = out + OrbClass(w, {dt.sector: SectorPoly(dt.sector.dim, [x.effective() for x in novs])})
    return out


def extract_v(w: Weights, j: int, J: JSeries) -> OrbClass:
    """The class ``v_j``: coefficient of ``z^1`` in ``D_j J``.

    Only the summand of degree ``c_j`` may contribute; anything else is a
    :class:`DerivationError`.
    """
    cj = c_sequence(w)[j - 1]
    parts = []
    for dt in apply_Dj(w, j, J):
        coeffs = [c.coefficient(1) for c in dt.poly.coeffs]
        if any(coeffs):
            if dt.degree != cj:
                raise DerivationError(f"degree {dt.degree} contributes to v_{j}")
            parts.append((dt, coeffs))
    return _collect(w, parts)


def extract_corner(w: Weights, J: JSeries) -> OrbClass:
    """``P o v_N``: coefficient of ``z^0`` in ``d/dt D_N J``."""
    N = w.N
    if J.degree_cap < 1:
        raise ValueError("series must reach degree 1")
    cN = c_sequence(w)[N - 1]
    parts = []
    for dt in apply_Dj(w, N, J):
        poly = dt.poly * _linear(dt.sector.dim, 1, dt.degree - cN)
        coeffs = [c.coefficient(1) for c in poly.coeffs]  # z^0 after dividing by z
        if any(coeffs):
            if dt.degree != 1:
                raise DerivationError(f"degree {dt.degree} contributes to P o v_N")
            parts.append((dt, coeffs))
    return _collect(w, parts)


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DerivationError("extracted v-classes are linearly dependent")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matrix_from_j(w: Weights, J: JSeries, check: bool = True) -> QuantumMatrix:
    """Rebuild the matrix of ``P o -`` in the standard basis from ``J`` alone.

    In the v-basis ``P o v_j = Q^(c_{j+1} - c_j) v_{j+1}`` for ``j < N`` and
    ``P o v_N`` is extracted from the series; the result is conjugated back
    with the extracted coordinates of the ``v_j``.  With ``check`` the result
    is compared against :func:`orbiqc.ring.p_matrix`.
    """
    N = w.N
    L = w.L
    c = c_sequence(w)
    vs = [extract_v(w, j, J) for j in range(1, N + 1)]
    V = []
    for v in vs:
        coords = v.coordinates()
        if not all(x.is_constant() for x in coords):
            raise DerivationError("v-classes should have Q-free coordinates")
        V.append([x.constant_term() for x in coords])
    # V[j] holds the coordinates of v_{j+1}; columns of the change of basis
    Vcols = [[V[j][i] for j in range(N)] for i in range(N)]
    Vinv = _invert(Vcols)
    images = []
    for j in range(N - 1):
        q = NovikovScalar({c[j + 1] - c[j]: 1}, lattice=L)
        images.append([q * x for x in V[j + 1]])
    images.append(extract_corner(w, J).coordinates())
    zero = NovikovScalar.zero(L)
    rows = []
    for i in range(N):
        row = []
        for k in range(N):
            acc = zero
            for j in range(N):
                if Vinv[j][k]:
                    acc = acc + images[j][i] * Vinv[j][k]
            row.append(acc)
        rows.append(tuple(row))
    result = QuantumMatrix(w, tuple(rows), tuple(basis(w)))
    if check:
        expected = p_matrix(w)
        if result.entries != expected.entries:
            raise DerivationMismatch(f"series-derived matrix disagrees with the closed form for {w}")
    return result
