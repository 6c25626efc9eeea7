"""Exact scalar and series arithmetic.

Everything here is rational; there is no floating point anywhere in the
package.  Three coefficient rings are provided:

* :class:`NovikovScalar` -- finite sums ``c * Q^e`` where the exponents live
  on a lattice ``(1/L) * Z``.  Exponents are stored as integers already
  scaled by ``L``.
* :class:`ZLaurent` -- finite Laurent polynomials in ``z``.
* :class:`SectorPoly` -- polynomials in the hyperplane class ``P`` truncated
  at ``P^(cap+1)``, with coefficients in either of the rings above.

Values are immutable; all operations return new objects.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "NovikovScalar",
    "ZLaurent",
    "SectorPoly",
    "novikov_mul",
    "sector_poly_mul",
    "expand_reciprocal_factor",
    "format_rational",
    "parse_rational",
]


def format_rational(x: Number) -> str:
    """Canonical text form ``p/q`` (``q`` omitted when 1)."""
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class NovikovScalar:
    """A finite exact sum ``sum c_e Q^e`` with ``e`` in ``(1/L) Z``.

    ``terms`` maps exponents (ints or Fractions) to coefficients.  When
    ``lattice`` is omitted the smallest lattice containing every exponent
    is used.  Negative exponents are refused unless ``allows_negative`` is
    set; that flag is only needed while working in the ring with ``Q``
    inverted.
    """

    __slots__ = ("_terms", "lattice", "allows_negative", "_hash")

    def __init__(
        self,
        terms: Mapping[Number, Number] | None = None,
        lattice: int | None = None,
        allows_negative: bool = False,
    ):
        items = [(_as_fraction(e), _as_fraction(c)) for e, c in (terms or {}).items()]
        if lattice is None:
            lattice = 1
            for e, _ in items:
                lattice = lcm(lattice, e.denominator)
        if lattice < 1:
            raise ValueError("lattice must be a positive integer")
        scaled: dict[int, Fraction] = {}
        for e, c in items:
            k = e * lattice
            if k.denominator != 1:
                raise ValueError(f"exponent {e} does not lie on the lattice (1/{lattice})Z")
            scaled[k.numerator] = scaled.get(k.numerator, Fraction(0)) + c
        self._init_scaled(scaled, lattice, allows_negative)

    def _init_scaled(self, scaled: dict[int, Fraction], lattice: int, allows_negative: bool):
        terms = tuple(sorted((k, c) for k, c in scaled.items() if c != 0))
        if not allows_negative and terms and terms[0][0] < 0:
            raise ValueError(
                f"negative Q-exponent {Fraction(terms[0][0], lattice)} in an effective Novikov scalar"
            )
        self._terms = terms
        self.lattice = lattice
        self.allows_negative = allows_negative
        self._hash = None

    @classmethod
    def _from_scaled(cls, scaled, lattice, allows_negative=False) -> "NovikovScalar":
        obj = cls.__new__(cls)
        obj._init_scaled(scaled, lattice, allows_negative)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, lattice: int = 1) -> "NovikovScalar":
        return cls._from_scaled({}, lattice)

    @classmethod
    def one(cls, lattice: int = 1) -> "NovikovScalar":
        return cls._from_scaled({0: Fraction(1)}, lattice)

    @classmethod
    def constant(cls, c: Number, lattice: int = 1) -> "NovikovScalar":
        return cls._from_scaled({0: _as_fraction(c)}, lattice)

    @classmethod
    def monomial(
        cls, coeff: Number, exponent: Number, lattice: int | None = None, allows_negative: bool = False
    ) -> "NovikovScalar":
        return cls({exponent: coeff}, lattice=lattice, allows_negative=allows_negative)

    # -- accessors ----------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        return tuple((Fraction(k, self.lattice), c) for k, c in self._terms)

    def as_dict(self) -> dict[Fraction, Fraction]:
        return dict(self.terms)

    def coefficient(self, exponent: Number) -> Fraction:
        k = _as_fraction(exponent) * self.lattice
        if k.denominator != 1:
            return Fraction(0)
        for kk, c in self._terms:
            if kk == k.numerator:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == 0 for k, _ in self._terms)

    def min_exponent(self) -> Fraction | None:
        return Fraction(self._terms[0][0], self.lattice) if self._terms else None

    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def effective(self) -> "NovikovScalar":
        """Drop the negative-exponent permission, checking it is no longer needed."""
        return NovikovScalar._from_scaled(dict(self._terms), self.lattice, False)

    def with_lattice(self, lattice: int) -> "NovikovScalar":
        if lattice % self.lattice:
            raise ValueError(f"lattice {lattice} is not a multiple of {self.lattice}")
        m = lattice // self.lattice
        return NovikovScalar._from_scaled({k * m: c for k, c in self._terms}, lattice, self.allows_negative)

    def truncate(self, max_exponent: Number) -> "NovikovScalar":
        bound = _as_fraction(max_exponent) * self.lattice
        return NovikovScalar._from_scaled(
            {k: c for k, c in self._terms if k <= bound}, self.lattice, self.allows_negative
        )

    def shift(self, exponent: Number, allows_negative: bool | None = None) -> "NovikovScalar":
        """Multiply by ``Q^exponent``."""
        e = _as_fraction(exponent)
        L = lcm(self.lattice, e.denominator)
        a = self if L == self.lattice else self.with_lattice(L)
        k = (e * L).numerator
        flag = self.allows_negative if allows_negative is None else allows_negative
        return NovikovScalar._from_scaled({kk + k: c for kk, c in a._terms}, L, flag)

    def with_flag(self, allows_negative: bool) -> "NovikovScalar":
        return NovikovScalar._from_scaled(dict(self._terms), self.lattice, allows_negative)

    def inverse_truncated(self, max_exponent: Number) -> "NovikovScalar":
        """Power-series inverse modulo terms of Q-degree above ``max_exponent``.

        Requires a nonzero constant term and no negative exponents.
        """
        c0 = self.constant_term()
        if c0 == 0 or (self._terms and self._terms[0][0] < 0):
            raise ZeroDivisionError("series inverse needs a nonzero constant term")
        L = self.lattice
        bound = _as_fraction(max_exponent) * L
        top = bound.numerator // bound.denominator
        a = dict(self._terms)
        inv: dict[int, Fraction] = {0: 1 / c0}
        for k in range(1, top + 1):
            s = Fraction(0)
            for i, ai in a.items():
                if 0 < i <= k and (k - i) in inv:
                    s += ai * inv[k - i]
            if s:
                inv[k] = -s / c0
        return NovikovScalar._from_scaled(inv, L)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "NovikovScalar | None":
        if isinstance(other, NovikovScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return NovikovScalar.constant(other, self.lattice)
        return None

    def _aligned(self, other: "NovikovScalar"):
        L = lcm(self.lattice, other.lattice)
        a = self if self.lattice == L else self.with_lattice(L)
        b = other if other.lattice == L else other.with_lattice(L)
        return a, b, L

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, L = self._aligned(other)
        out = dict(a._terms)
        for k, c in b._terms:
            out[k] = out.get(k, Fraction(0)) + c
        return NovikovScalar._from_scaled(out, L, a.allows_negative or b.allows_negative)

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._from_scaled({k: -c for k, c in self._terms}, self.lattice, self.allows_negative)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return NovikovScalar._from_scaled(
                {k: v * c for k, v in self._terms}, self.lattice, self.allows_negative
            )
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        a, b, L = self._aligned(other)
        out: dict[int, Fraction] = {}
        for ka, ca in a._terms:
            for kb, cb in b._terms:
                out[ka + kb] = out.get(ka + kb, Fraction(0)) + ca * cb
        return NovikovScalar._from_scaled(out, L, a.allows_negative or b.allows_negative)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = NovikovScalar.one(self.lattice).with_flag(self.allows_negative)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.lattice == other.lattice:
            return self._terms == other._terms
        a, b, _ = self._aligned(other)
        return a._terms == b._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- text form ----------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (e, c) in enumerate(self.terms):
            neg = c < 0 and i > 0
            body = _render_monomial(-c if neg else c, e, "Q")
            if i == 0:
                parts.append(body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"NovikovScalar({str(self)!r})"

    @classmethod
    def parse(cls, text: str, lattice: int | None = None, allows_negative: bool = False) -> "NovikovScalar":
        """Inverse of ``str()``; accepts ``1/2*Q^(1/2) - Q + 3`` style input."""
        return cls(_parse_sum(text, "Q"), lattice=lattice, allows_negative=allows_negative)


def _render_monomial(c: Fraction, e, var: str) -> str:
    if e == 0:
        return str(c)
    e = Fraction(e)
    if e.denominator == 1 and e > 0:
        pw = var if e == 1 else f"{var}^{e.numerator}"
    else:
        pw = f"{var}^({e})"
    if c == 1:
        return pw
    if c == -1:
        return "-" + pw
    return f"{c}*{pw}"


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?
        \s*(?P<star>\*)?\s*
        (?:(?P<var>[A-Za-z])(?:\^(?:\((?P<pexp>-?\d+(?:/\d+)?)\)|(?P<iexp>\d+)))?)?
        \s*""",
    re.VERBOSE,
)


def _parse_sum(text: str, var: str) -> dict[Fraction, Fraction]:
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    out: dict[Fraction, Fraction] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        sign, coef, star, v = m.group("sign"), m.group("coef"), m.group("star"), m.group("var")
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r} at offset {pos}")
        if coef is None and v is None:
            raise ValueError(f"empty term in {text!r} at offset {pos}")
        if star and (coef is None or v is None):
            raise ValueError(f"dangling '*' in {text!r}")
        if v is not None and v != var:
            raise ValueError(f"unexpected variable {v!r} (expected {var!r})")
        c = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            c = -c
        if v is None:
            e = Fraction(0)
        elif m.group("pexp") is not None:
            e = Fraction(m.group("pexp"))
        elif m.group("iexp") is not None:
            e = Fraction(int(m.group("iexp")))
        else:
            e = Fraction(1)
        out[e] = out.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    return out


def novikov_mul(a: NovikovScalar, b: NovikovScalar) -> NovikovScalar:
    return a * b


class ZLaurent:
    """Finite Laurent polynomial in ``z`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean: dict[int, Fraction] = {}
        for k, c in (terms or {}).items():
            if not isinstance(k, int):
                raise TypeError("z-powers must be integers")
            c = _as_fraction(c)
            if c:
                clean[k] = clean.get(k, Fraction(0)) + c
        self._terms = {k: c for k, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "ZLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "ZLaurent":
        return cls._raw({})

    @classmethod
    def one(cls) -> "ZLaurent":
        return cls._raw({0: Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Number, power: int) -> "ZLaurent":
        return cls({power: coeff})

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple(sorted(self._terms.items()))

    def coefficient(self, power: int) -> Fraction:
        return self._terms.get(power, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def max_power(self) -> int | None:
        return max(self._terms) if self._terms else None

    def min_power(self) -> int | None:
        return min(self._terms) if self._terms else None

    def _coerce(self, other):
        if isinstance(other, ZLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return ZLaurent._raw({0: Fraction(other)} if other else {})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ZLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ZLaurent._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZLaurent._raw({})
            return ZLaurent._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, ZLaurent):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                out[ka + kb] = out.get(ka + kb, 0) + ca * cb
        return ZLaurent._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def shift(self, k: int) -> "ZLaurent":
        """Multiply by ``z^k``."""
        return ZLaurent._raw({p + k: c for p, c in self._terms.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (k, c) in enumerate(sorted(self._terms.items(), reverse=True)):
            neg = c < 0 and i > 0
            body = _render_monomial(-c if neg else c, k, "z")
            parts.append(body if i == 0 else (" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"ZLaurent({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "ZLaurent":
        raw = _parse_sum(text, "z")
        out = {}
        for e, c in raw.items():
            if e.denominator != 1:
                raise ValueError("z-powers must be integers")
            out[e.numerator] = c
        return cls(out)


Coefficient = Union[NovikovScalar, ZLaurent]


class SectorPoly:
    """``c_0 + c_1 P + ... + c_cap P^cap`` modulo ``P^(cap+1)``.

    ``coeffs`` must have exactly ``cap + 1`` entries, all from the same
    coefficient ring.
    """

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap: int, coeffs: Iterable[Coefficient]):
        coeffs = tuple(coeffs)
        if cap < 0:
            raise ValueError("cap must be non-negative")
        if len(coeffs) != cap + 1:
            raise ValueError(f"expected {cap + 1} coefficients, got {len(coeffs)}")
        self.cap = cap
        self.coeffs = coeffs

    @classmethod
    def constant(cls, cap: int, c: Coefficient) -> "SectorPoly":
        zero = c * 0
        return cls(cap, (c,) + (zero,) * cap)

    @classmethod
    def monomial(cls, cap: int, c: Coefficient, p: int) -> "SectorPoly":
        zero = c * 0
        return cls(cap, tuple(c if i == p else zero for i in range(cap + 1)))

    @classmethod
    def linear(cls, cap: int, const: Coefficient, p_coeff: Coefficient) -> "SectorPoly":
        """``const + p_coeff * P`` (truncated)."""
        zero = const * 0
        tail = [p_coeff] if cap >= 1 else []
        return cls(cap, [const] + tail + [zero] * (cap - len(tail)))

    def coefficient(self, p: int) -> Coefficient:
        return self.coeffs[p] if 0 <= p <= self.cap else self.coeffs[0] * 0

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def map(self, fn) -> "SectorPoly":
        return SectorPoly(self.cap, (fn(c) for c in self.coeffs))

    def _check(self, other: "SectorPoly"):
        if not isinstance(other, SectorPoly):
            raise TypeError("expected a SectorPoly")
        if other.cap != self.cap:
            raise ValueError(f"cap mismatch: {self.cap} vs {other.cap}")

    def __add__(self, other):
        if not isinstance(other, SectorPoly):
            return NotImplemented
        self._check(other)
        return SectorPoly(self.cap, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return SectorPoly(self.cap, (-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, SectorPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SectorPoly):
            self._check(other)
            n = self.cap + 1
            a, b = self.coeffs, other.coeffs
            out = []
            for k in range(n):
                acc = a[0] * b[k]
                for i in range(1, k + 1):
                    acc = acc + a[i] * b[k - i]
                out.append(acc)
            return SectorPoly(self.cap, out)
        if isinstance(other, (int, Fraction, NovikovScalar, ZLaurent)):
            return SectorPoly(self.cap, (c * other for c in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, NovikovScalar, ZLaurent)):
            return SectorPoly(self.cap, (other * c for c in self.coeffs))
        return NotImplemented

    def times_p(self, k: int = 1) -> "SectorPoly":
        """Multiply by ``P^k`` (truncating)."""
        zero = self.coeffs[0] * 0
        shifted = [zero] * min(k, self.cap + 1) + list(self.coeffs[: max(self.cap + 1 - k, 0)])
        return SectorPoly(self.cap, shifted)

    def __eq__(self, other):
        if not isinstance(other, SectorPoly):
            return NotImplemented
        return self.cap == other.cap and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.cap, self.coeffs))

    def __str__(self):
        parts = []
        for p, c in enumerate(self.coeffs):
            if not c:
                continue
            pw = "" if p == 0 else ("P" if p == 1 else f"P^{p}")
            parts.append(f"({c})" + (f"*{pw}" if pw else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"SectorPoly(cap={self.cap}, {str(self)})"


def sector_poly_mul(a: SectorPoly, b: SectorPoly) -> SectorPoly:
    return a * b


def expand_reciprocal_factor(w: int, b: Number, cap: int) -> SectorPoly:
    """Expand ``1/(w P + b z)`` modulo ``P^(cap+1)``.

    Returns ``sum_p (-w)^p b^(-p-1) z^(-p-1) P^p``; exact because ``P`` is
    nilpotent.
    """
    b = _as_fraction(b)
    if b <= 0:
        raise ValueError(f"b must be positive, got {b}")
    if w < 1:
        raise ValueError(f"w must be a positive integer, got {w}")
    coeffs = []
    inv_b = 1 / b
    term = inv_b
    for p in range(cap + 1):
        coeffs.append(ZLaurent._raw({-p - 1: term}))
        term = term * (-w) * inv_b
    return SectorPoly(cap, coeffs)
