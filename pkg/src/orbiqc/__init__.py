"""Exact small quantum orbifold cohomology of weighted projective spaces.

Quantum multiplication by the hyperplane class, the small J-function and
the mirror data of complete intersections, all over exact rationals.
"""

from .exact import NovikovScalar, Rational, SectorPoly, ZLaurent
from .sectors import BasisElement, OrbClass, Sector, Weights, basis, sector_set

__version__ = "0.1.0"

__all__ = [
    "NovikovScalar",
    "Rational",
    "SectorPoly",
    "ZLaurent",
    "BasisElement",
    "OrbClass",
    "Sector",
    "Weights",
    "basis",
    "sector_set",
]
