"""Inertia-stack combinatorics of a weighted projective space P(w_0, ..., w_n).

The twisted sectors are indexed by the fractions ``f = k / w_i`` in
``[0, 1)``.  Each sector is itself a weighted projective space on the
sub-list of weights with ``w_i f`` integral, and carries an age shift
``sum_i <-w_i f>``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import floor, lcm, prod
from typing import Iterable, Mapping, Sequence

from .exact import NovikovScalar, SectorPoly

__all__ = [
    "Weights",
    "Sector",
    "BasisElement",
    "OrbClass",
    "frac",
    "sector_set",
    "sector_for",
    "basis",
    "involution",
    "orbifold_degree",
    "pairing",
    "pair_classes",
    "virtual_dim",
    "graph_space_dim",
]


def frac(x: Fraction) -> Fraction:
    """Fractional part ``<x> = x - floor(x)``."""
    return x - floor(x)


@dataclass(frozen=True)
class Weights:
    """Weights of P(w_0, ..., w_n)."""

    w: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.w)
        if not w:
            raise ValueError("at least one weight is required")
        for x in w:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"weights must be positive integers, got {x!r}")
            if x < 1:
                raise ValueError("weights must be positive")
        if len(w) == 1:
            warnings.warn("a single weight gives a zero-dimensional space", stacklevel=3)
        object.__setattr__(self, "w", w)

    @classmethod
    def parse(cls, text: str) -> "Weights":
        try:
            parts = [int(p) for p in text.replace(" ", "").split(",") if p != ""]
        except ValueError:
            raise ValueError(f"malformed weight list {text!r}") from None
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return len(self.w) - 1

    @cached_property
    def L(self) -> int:
        return lcm(*self.w)

    @cached_property
    def N(self) -> int:
        return sum(self.w)

    def __iter__(self):
        return iter(self.w)

    def __len__(self):
        return len(self.w)

    def __str__(self):
        return "P(" + ",".join(map(str, self.w)) + ")"


@dataclass(frozen=True, order=True)
class Sector:
    """One component P(V^f) of the inertia stack."""

    f: Fraction
    dim: int = field(compare=False)
    age: Fraction = field(compare=False)
    subweights: tuple[int, ...] = field(compare=False)

    @property
    def is_untwisted(self) -> bool:
        return self.f == 0

    def __str__(self):
        return f"1_{self.f}"


def _make_sector(w: Weights, f: Fraction) -> Sector:
    sub = tuple(x for x in w.w if (x * f).denominator == 1)
    if not sub:
        raise ValueError(f"{f} is not a sector index of {w}")
    age = sum((frac(-x * f) for x in w.w), Fraction(0))
    return Sector(f=f, dim=len(sub) - 1, age=age, subweights=sub)


@lru_cache(maxsize=None)
def _sectors(w: Weights) -> tuple[Sector, ...]:
    fs = {Fraction(k, x) for x in w.w for k in range(x)}
    return tuple(_make_sector(w, f) for f in sorted(fs))


def sector_set(w: Weights) -> list[Sector]:
    """All sectors, sorted by increasing ``f``; the first is ``f = 0``."""
    return list(_sectors(w))


def sector_for(w: Weights, f) -> Sector:
    f = Fraction(f)
    for s in _sectors(w):
        if s.f == f:
            return s
    raise ValueError(f"{f} is not a sector index of {w}")


def in_F(w: Weights, f) -> bool:
    f = Fraction(f)
    return 0 <= f < 1 and any((x * f).denominator == 1 for x in w.w)


def involution(w: Weights, f) -> Fraction:
    """The index ``<-f>`` of the sector exchanged with ``f``."""
    f = Fraction(f)
    if not in_F(w, f):
        raise ValueError(f"{f} is not a sector index of {w}")
    return frac(-f)


@dataclass(frozen=True)
class BasisElement:
    """``1_f P^p`` at slot ``position`` (0-based) of the standard ordering."""

    sector: Sector
    p: int
    position: int

    def __str__(self):
        if self.p == 0:
            return str(self.sector)
        pw = "P" if self.p == 1 else f"P^{self.p}"
        return f"{pw}*{self.sector}"


@lru_cache(maxsize=None)
def _basis(w: Weights) -> tuple[BasisElement, ...]:
    out = []
    for s in _sectors(w):
        for p in range(s.dim + 1):
            out.append(BasisElement(s, p, len(out)))
    return tuple(out)


def basis(w: Weights) -> list[BasisElement]:
    """Ordered basis: increasing ``f``, then increasing power of ``P``."""
    return list(_basis(w))


def orbifold_degree(e: BasisElement) -> Fraction:
    """Real age-shifted degree ``2p + 2 age``."""
    return 2 * e.p + 2 * e.sector.age


def pairing(w: Weights, a: BasisElement, b: BasisElement) -> Fraction:
    """Orbifold Poincare pairing of two basis classes.

    Evaluated as ``delta / prod(subweights)``: the integral of the top power
    of the hyperplane class over the sector P(V^f).
    """
    if b.sector.f != frac(-a.sector.f) or a.p + b.p != a.sector.dim:
        return Fraction(0)
    return Fraction(1, prod(a.sector.subweights))


class OrbClass:
    """An orbifold cohomology class with Novikov coefficients.

    Stored per sector as a :class:`SectorPoly` whose cap is the sector
    dimension.  Missing sectors are zero.
    """

    __slots__ = ("weights", "components")

    def __init__(self, weights: Weights, components: Mapping[Sector, SectorPoly] | None = None):
        self.weights = weights
        comps = {}
        for s, poly in (components or {}).items():
            if poly.cap != s.dim:
                raise ValueError(f"component on {s} has cap {poly.cap}, expected {s.dim}")
            if not poly.is_zero():
                comps[s] = poly
        self.components = comps

    @classmethod
    def zero(cls, weights: Weights) -> "OrbClass":
        return cls(weights)

    @classmethod
    def from_basis(cls, weights: Weights, e: BasisElement, coeff=1) -> "OrbClass":
        if not isinstance(coeff, NovikovScalar):
            coeff = NovikovScalar.constant(coeff, weights.L)
        return cls(weights, {e.sector: SectorPoly.monomial(e.sector.dim, coeff, e.p)})

    @classmethod
    def from_coordinates(cls, weights: Weights, coords: Sequence) -> "OrbClass":
        out = cls.zero(weights)
        for e, c in zip(_basis(weights), coords):
            if c:
                out = out + cls.from_basis(weights, e, c)
        return out

    def coordinates(self) -> list[NovikovScalar]:
        """Coefficients against :func:`basis`."""
        zero = NovikovScalar.zero(self.weights.L)
        out = []
        for e in _basis(self.weights):
            poly = self.components.get(e.sector)
            out.append(poly.coeffs[e.p] if poly is not None else zero)
        return out

    def terms(self) -> Iterable[tuple[BasisElement, NovikovScalar]]:
        for e, c in zip(_basis(self.weights), self.coordinates()):
            if c:
                yield e, c

    def __add__(self, other: "OrbClass") -> "OrbClass":
        if not isinstance(other, OrbClass):
            return NotImplemented
        comps = dict(self.components)
        for s, poly in other.components.items():
            comps[s] = comps[s] + poly if s in comps else poly
        return OrbClass(self.weights, comps)

    def __neg__(self):
        return OrbClass(self.weights, {s: -p for s, p in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "OrbClass":
        return OrbClass(self.weights, {s: p * c for s, p in self.components.items()})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, OrbClass):
            return NotImplemented
        return self.weights == other.weights and self.coordinates() == other.coordinates()

    def __hash__(self):
        return hash(tuple(self.coordinates()))

    def __str__(self):
        parts = []
        for e, c in self.terms():
            parts.append(f"({c})*{e}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def pair_classes(x: OrbClass, y: OrbClass) -> NovikovScalar:
    """Novikov-bilinear extension of :func:`pairing`."""
    w = x.weights
    total = NovikovScalar.zero(w.L)
    ys = list(y.terms())
    for a, ca in x.terms():
        for b, cb in ys:
            v = pairing(w, a, b)
            if v:
                total = total + ca * cb * v
    return total


def virtual_dim(
    w: Weights, g: int, n_marks: int, d, sector_ages: Sequence = ()
) -> Fraction:
    """Real virtual dimension of a moduli space of twisted stable maps.

    ``2 n_marks + (2 - 2g)(n - 3) + 2 N d - 2 sum(ages)``, using
    ``K(d) = -N d`` for weighted projective space.
    """
    d = Fraction(d)
    if g < 0 or n_marks < 0 or d < 0:
        raise ValueError("g, n_marks and d must be non-negative")
    if len(sector_ages) != n_marks and sector_ages:
        raise ValueError("one age per marked point")
    if n_marks == 1 and not in_F(w, frac(d)):
        raise ValueError(f"<{d}> is not a sector index; the moduli space is empty")
    return (
        2 * n_marks
        + (2 - 2 * g) * (w.n - 3)
        + 2 * w.N * d
        - 2 * sum((Fraction(a) for a in sector_ages), Fraction(0))
    )


def graph_space_dim(w: Weights, d) -> int:
    d = Fraction(d)
    if d <= 0:
        raise ValueError("degree must be positive")
    if not in_F(w, frac(d)):
        raise ValueError(f"<{d}> is not a sector index of {w}")
    return w.n + sum(floor(d * x) for x in w.w)
