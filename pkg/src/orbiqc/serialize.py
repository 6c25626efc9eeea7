"""JSON encoding of the exact data types, and the matching decoders.

Rationals are always strings ``"p/q"``; Novikov scalars use their text
form (``"1/2*Q^(1/2)"``).  Every encoder has a decoder that restores the
original object given the weights.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exact import NovikovScalar, SectorPoly, ZLaurent, format_rational, parse_rational
from .jfunction import JSeries, JTerm
from .ring import QuantumMatrix
from .sectors import OrbClass, Sector, Weights, basis, sector_for

SCHEMA = "orbiqc/1"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def envelope(command: str, **payload) -> dict:
    return {"schema": SCHEMA, "command": command, **payload}


def q_to_json(x: Fraction) -> str:
    return format_rational(x)


def q_from_json(s: str) -> Fraction:
    return parse_rational(s)


def novikov_to_json(x: NovikovScalar) -> str:
    return str(x)


def novikov_from_json(s: str, w: Weights) -> NovikovScalar:
    return NovikovScalar.parse(s, lattice=w.L)


def sector_to_json(s: Sector) -> dict:
    return {"f": q_to_json(s.f), "dim": s.dim, "age": q_to_json(s.age)}


def sector_from_json(data: dict, w: Weights) -> Sector:
    s = sector_for(w, q_from_json(data["f"]))
    if s.dim != data["dim"] or s.age != q_from_json(data["age"]):
        raise ValueError(f"sector record {data} does not match {w}")
    return s


def matrix_to_json(m: QuantumMatrix) -> list[list[str]]:
    return [[novikov_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(rows, w: Weights, basis_scale=None) -> QuantumMatrix:
    entries = tuple(tuple(novikov_from_json(x, w) for x in row) for row in rows)
    scale = None if basis_scale is None else tuple(novikov_from_json(x, w) for x in basis_scale)
    return QuantumMatrix(w, entries, tuple(basis(w)), scale)


def class_to_json(x: OrbClass) -> list[str]:
    return [novikov_to_json(c) for c in x.coordinates()]


def class_from_json(coords, w: Weights) -> OrbClass:
    return OrbClass.from_coordinates(w, [novikov_from_json(c, w) for c in coords])


def _laurent_to_json(x: ZLaurent) -> list:
    return [[k, q_to_json(c)] for k, c in x.terms]


def _laurent_from_json(data) -> ZLaurent:
    return ZLaurent({int(k): q_from_json(c) for k, c in data})


def term_to_json(t: JTerm) -> dict:
    return {
        "degree": q_to_json(t.degree),
        "sector": q_to_json(t.sector.f),
        "coefficients": [_laurent_to_json(c) for c in t.poly.coeffs],
    }


def term_from_json(data: dict, w: Weights) -> JTerm:
    s = sector_for(w, q_from_json(data["sector"]))
    poly = SectorPoly(s.dim, [_laurent_from_json(c) for c in data["coefficients"]])
    return JTerm(q_from_json(data["degree"]), s, poly)


def jseries_to_json(J: JSeries) -> list[dict]:
    return [term_to_json(t) for t in J.terms]


def jseries_from_json(data, w: Weights, cap) -> JSeries:
    return JSeries(w, Fraction(cap), tuple(term_from_json(t, w) for t in data))
