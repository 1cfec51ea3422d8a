"""Exact Ringel-Hall and Bridgeland Hall algebras of monomial quiver algebras over F_q."""

from .coeff import QSqrt, quantum_binomial, quantum_factorial, quantum_integer
from .quiver import AlgebraSpec, linear_quiver, load_algebra, parse_algebra

__all__ = [
    "AlgebraSpec",
    "QSqrt",
    "linear_quiver",
    "load_algebra",
    "parse_algebra",
    "quantum_binomial",
    "quantum_factorial",
    "quantum_integer",
]
