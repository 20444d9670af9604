"""Exact toolkit for toric Euler-Jacobi vanishing and its converse."""

from .laurent import LaurentPolynomial, LaurentSystem, parse, torus_jacobian
from .polytope import LatticePolytope, convex_hull, mixed_volume
from .quotient import build_quotient, numeric_roots
from .residue import ResidueContext, euler_jacobi_check

__version__ = "0.1.0"

__all__ = [
    "LaurentPolynomial",
    "LaurentSystem",
    "LatticePolytope",
    "ResidueContext",
    "build_quotient",
    "convex_hull",
    "euler_jacobi_check",
    "mixed_volume",
    "numeric_roots",
    "parse",
    "torus_jacobian",
]
