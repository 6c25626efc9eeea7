"""Small quantum orbifold cohomology of P(w_0, ..., w_n) at t = 0.

Multiplication by the hyperplane class ``P`` is a cyclic shift on the
standard basis ``1_f P^p`` with weights ``r_1, ..., r_N``; inverting ``Q``
the whole algebra is generated by ``P``, which is how the full
multiplication table is built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, prod

from .exact import NovikovScalar, SectorPoly
from .sectors import BasisElement, OrbClass, Sector, Weights, basis, sector_set

__all__ = [
    "c_sequence",
    "s_closed",
    "sigma",
    "r_entries",
    "QuantumMatrix",
    "p_matrix",
    "companion_matrix",
    "Relation",
    "RingPresentation",
    "presentation",
    "MultiplicationTable",
    "multiplication_table",
    "chen_ruan_table",
    "EffectivityError",
]


class EffectivityError(ArithmeticError):
    """A structure constant came out with a negative power of Q."""


@lru_cache(maxsize=None)
def _c_sequence(w: Weights) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(k, x) for x in w.w for k in range(x)))


def c_sequence(w: Weights) -> list[Fraction]:
    """All fractions ``k/w_i`` (``0 <= k < w_i``) with multiplicity, sorted."""
    return list(_c_sequence(w))


def s_closed(w: Weights, f) -> Fraction:
    """``prod_i w_i^(-ceil(f w_i))``, and 1 for ``f = 0``.

    ``f = 1`` is allowed and gives ``prod_i w_i^(-w_i)``.
    """
    f = Fraction(f)
    if not (0 <= f <= 1):
        raise ValueError("f must lie in [0, 1]")
    if f == 0:
        return Fraction(1)
    return Fraction(1, prod(x ** ceil(f * x) for x in w.w))


def sigma(w: Weights, j: int) -> Fraction:
    """Rescaling constant of the ``j``-th element (1-based) of the v-basis.

    Ratio of ``prod (c_j - c_m)`` over earlier-valued ``c_m`` to the product of
    the ``b`` with ``<b> = <c_j w_i>``, ``0 < b <= c_j w_i``.
    """
    c = _c_sequence(w)
    if not 1 <= j <= len(c):
        raise IndexError(f"j must be in 1..{len(c)}")
    cj = c[j - 1]
    num = prod((cj - cm for cm in c if cm < cj), start=Fraction(1))
    den = Fraction(1)
    for x in w.w:
        b = cj * x
        while b > 0:
            den *= b
            b -= 1
    return num / den


def _blocks(w: Weights) -> list[tuple[Sector, int]]:
    """(sector, 0-based index of its first basis slot)."""
    out, m = [], 0
    for s in sector_set(w):
        out.append((s, m))
        m += s.dim + 1
    return out


def r_entries(w: Weights) -> list[NovikovScalar]:
    """``r_1, ..., r_N``: the sub-diagonal followed by the corner entry."""
    L = w.L
    out: list[NovikovScalar] = []
    secs = sector_set(w)
    for j, s in enumerate(secs):
        nxt = secs[j + 1].f if j + 1 < len(secs) else Fraction(1)
        out.extend([NovikovScalar.one(L)] * s.dim)
        ratio = s_closed(w, nxt) / s_closed(w, s.f)
        out.append(NovikovScalar({nxt - s.f: ratio}, lattice=L))
    return out


@dataclass(frozen=True)
class QuantumMatrix:
    """Matrix of ``P o -``; column ``j`` is the image of basis vector ``j``.

    ``basis_scale`` is ``None`` for the standard basis.  Otherwise entry
    ``j`` is the factor ``Q^(c_j) sigma_j`` with which the rescaled basis
    vector ``Q^(c_j) v_j`` multiplies the standard vector ``j``.
    """

    weights: Weights
    entries: tuple[tuple[NovikovScalar, ...], ...]
    basis: tuple[BasisElement, ...]
    basis_scale: tuple[NovikovScalar, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, row: int, col: int) -> NovikovScalar:
        return self.entries[row][col]

    def column(self, col: int) -> list[NovikovScalar]:
        return [row[col] for row in self.entries]

    def to_standard(self) -> "QuantumMatrix":
        """Undo the diagonal basis change of a rescaled matrix.

        Standard-basis entry ``(i, j)`` is ``scale_i * M[i][j] / scale_j``;
        the division is done in the Q-inverted ring and checked effective.
        """
        if self.basis_scale is None:
            return self
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                m = self.entries[i][j]
                if m:
                    sj = self.basis_scale[j]
                    (e, c), = sj.terms
                    inv = NovikovScalar.monomial(1 / c, -e, allows_negative=True)
                    m = (self.basis_scale[i] * m * inv).effective()
                row.append(m)
            rows.append(tuple(row))
        return QuantumMatrix(self.weights, tuple(rows), self.basis)

    def to_latex(self, symbolic_t: bool = False) -> str:
        return matrix_to_latex(self, symbolic_t=symbolic_t)


def _cyclic(w: Weights, values: list[NovikovScalar], scale=None) -> QuantumMatrix:
    n = len(values)
    zero = NovikovScalar.zero(w.L)
    rows = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = values[i]
    if n == 1:
        rows[0][0] = values[0]
    else:
        rows[0][n - 1] = values[n - 1]
    return QuantumMatrix(w, tuple(tuple(r) for r in rows), tuple(basis(w)), scale)


def p_matrix(w: Weights) -> QuantumMatrix:
    """Quantum multiplication by ``P`` in the standard basis."""
    return _cyclic(w, r_entries(w))


def companion_matrix(w: Weights) -> QuantumMatrix:
    """Matrix of ``P o -`` in the rescaled basis ``Q^(c_j) v_j``."""
    L = w.L
    N = w.N
    corner = NovikovScalar({1: Fraction(1, prod(x**x for x in w.w))}, lattice=L)
    values = [NovikovScalar.one(L)] * (N - 1) + [corner]
    c = _c_sequence(w)
    scale = tuple(NovikovScalar({c[j]: sigma(w, j + 1)}, lattice=L) for j in range(N))
    return _cyclic(w, values, scale)


@dataclass(frozen=True)
class Relation:
    """``P^power * 1_source = rhs * 1_target``."""

    source: Sector
    power: int
    rhs: NovikovScalar
    target: Sector

    def __str__(self):
        pw = "P" if self.power == 1 else f"P^{self.power}"
        lhs = pw + ("" if self.source.f == 0 else f"*1_{self.source.f}")
        tgt = "" if self.target.f == 0 else f"*1_{self.target.f}"
        return f"{lhs} = {_wrap(self.rhs)}{tgt}"


def _wrap(x: NovikovScalar) -> str:
    s = str(x)
    return f"({s})" if len(x.terms) > 1 else s


@dataclass(frozen=True)
class RingPresentation:
    weights: Weights
    relations: tuple[Relation, ...]
    top_power: int
    top_relation: NovikovScalar

    def chained(self) -> NovikovScalar:
        """Product of all relation right-hand sides (should equal ``top_relation``)."""
        out = NovikovScalar.one(self.weights.L)
        for r in self.relations:
            out = out * r.rhs
        return out

    def top_str(self) -> str:
        return f"P^{self.top_power} = {_wrap(self.top_relation)}"


def presentation(w: Weights) -> RingPresentation:
    secs = sector_set(w)
    r = r_entries(w)
    rels = []
    for j, (s, start) in enumerate(_blocks(w)):
        target = secs[(j + 1) % len(secs)]
        rels.append(Relation(s, s.dim + 1, r[start + s.dim], target))
    top = NovikovScalar({1: Fraction(1, prod(x**x for x in w.w))}, lattice=w.L)
    return RingPresentation(w, tuple(rels), w.N, top)


class MultiplicationTable:
    """Structure constants ``e_a o e_b`` over the standard basis.

    Every basis class is a Novikov multiple of a power of ``P`` acting on
    ``1_0``; products are reduced with ``P^N = Q prod w^-w``.
    """

    def __init__(self, weights: Weights, products: dict[tuple[int, int], OrbClass], quantum: bool):
        self.weights = weights
        self.basis = tuple(basis(weights))
        self._products = products
        self.quantum = quantum

    def product(self, a: int, b: int) -> OrbClass:
        return self._products[(a, b)] if a <= b else self._products[(b, a)]

    def multiply(self, x: OrbClass, y: OrbClass) -> OrbClass:
        out = OrbClass.zero(self.weights)
        ys = list(y.terms())
        for ea, ca in x.terms():
            for eb, cb in ys:
                out = out + self.product(ea.position, eb.position).scale(ca * cb)
        return out

    def element(self, position: int) -> OrbClass:
        return OrbClass.from_basis(self.weights, self.basis[position])

    def p_class(self) -> OrbClass:
        return self.element(1) if self.basis[0].sector.dim >= 1 else OrbClass.zero(self.weights)

    def items(self):
        n = len(self.basis)
        for a in range(n):
            for b in range(a, n):
                yield (a, b), self._products[(a, b)]


def _power_class(w: Weights, m: int, coeff: NovikovScalar) -> OrbClass:
    """``coeff * P^m 1_0`` rewritten in the standard basis."""
    N = w.N
    q, rem = divmod(m, N)
    blocks = _blocks(w)
    for s, start in reversed(blocks):
        if start <= rem:
            p = rem - start
            break
    base = NovikovScalar({q: Fraction(1, prod(x**x for x in w.w)) ** q}, lattice=w.L)
    shift = NovikovScalar({s.f: s_closed(w, s.f)}, lattice=w.L)
    c = coeff * base * shift
    if c.min_exponent() is not None and c.min_exponent() < 0:
        raise EffectivityError(f"negative Q-exponent in P^{m}*1_0 -> {c}")
    c = c.effective()
    return OrbClass(w, {s: SectorPoly.monomial(s.dim, c, p)})


@lru_cache(maxsize=None)
def _quantum_table(w: Weights) -> MultiplicationTable:
    L = w.L
    start = {s.f: m for s, m in _blocks(w)}
    els = basis(w)
    # e = 1_f P^p = Q^(-f) s_f^(-1) P^(M_f + p) 1_0
    expo = []
    for e in els:
        f = e.sector.f
        inv = NovikovScalar({-f: 1 / s_closed(w, f)}, lattice=L, allows_negative=True)
        expo.append((start[f] + e.p, inv))
    prods = {}
    for a in range(len(els)):
        for b in range(a, len(els)):
            ma, ca = expo[a]
            mb, cb = expo[b]
            prods[(a, b)] = _power_class(w, ma + mb, ca * cb)
    return MultiplicationTable(w, prods, quantum=True)


def multiplication_table(w: Weights) -> MultiplicationTable:
    return _quantum_table(w)


def _q_zero(x: OrbClass) -> OrbClass:
    comps = {}
    for s, poly in x.components.items():
        comps[s] = poly.map(lambda c: NovikovScalar.constant(c.constant_term(), c.lattice))
    return OrbClass(x.weights, comps)


@lru_cache(maxsize=None)
def _cr_table(w: Weights) -> MultiplicationTable:
    q = _quantum_table(w)
    return MultiplicationTable(w, {k: _q_zero(v) for k, v in q.items()}, quantum=False)


def chen_ruan_table(w: Weights) -> MultiplicationTable:
    """The ``Q -> 0`` limit of the quantum table (Chen-Ruan cup product)."""
    return _cr_table(w)


def matrix_to_latex(m: QuantumMatrix, symbolic_t: bool = False) -> str:
    from .render import latex_novikov

    rows = []
    for row in m.entries:
        rows.append(" & ".join(latex_novikov(x, symbolic_t) for x in row))
    body = " \\\\\n".join(rows)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"
