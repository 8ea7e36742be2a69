"""Exact multivariate polynomials over the rationals."""

from .factor import (
    PolySet,
    content,
    content_and_primitive,
    coprime_basis,
    gcd,
    is_squarefree,
    lcm,
    primitive_part,
    square_free_basis,
    squarefree_decomposition,
    squarefree_factors,
    squarefree_part,
)
from .parse import ParseError, parse_polynomial
from .ring import Polynomial, VarOrder, divide_exact

__all__ = [
    "ParseError",
    "PolySet",
    "Polynomial",
    "VarOrder",
    "content",
    "content_and_primitive",
    "coprime_basis",
    "divide_exact",
    "gcd",
    "is_squarefree",
    "lcm",
    "parse_polynomial",
    "primitive_part",
    "square_free_basis",
    "squarefree_decomposition",
    "squarefree_factors",
    "squarefree_part",
]
