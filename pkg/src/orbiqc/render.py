"""Text and LaTeX rendering of Novikov scalars."""

from __future__ import annotations

import re
from fractions import Fraction

from .exact import NovikovScalar

_Q_RE = re.compile(r"Q(\^(?:\([^)]*\)|\d+))?")


def _latex_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def _latex_power(e: Fraction, symbolic_t: bool) -> str:
    base = "(Qe^{t})" if symbolic_t else "Q"
    if e == 1:
        return "Qe^{t}" if symbolic_t else "Q"
    exp = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    return f"{base}^{{{exp}}}"


def latex_novikov(x: NovikovScalar, symbolic_t: bool = False) -> str:
    if x.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(x.terms):
        neg = c < 0
        mag = -c if neg else c
        if e == 0:
            body = _latex_fraction(mag)
        elif mag == 1:
            body = _latex_power(e, symbolic_t)
        else:
            body = _latex_fraction(mag) + " " + _latex_power(e, symbolic_t)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def with_qet(text: str) -> str:
    """Replace the Novikov variable ``Q`` by the t-dependent token ``Qe^t``."""
    return _Q_RE.sub(lambda m: "(Qe^t)" + m.group(1) if m.group(1) else "Qe^t", text)
