from .groebner import (
    Ideal,
    buchberger,
    discriminant,
    eliminate,
    elimination_order,
    is_groebner,
    jacobian_ideal,
    reduce,
    s_polynomial,
)
from .order import MonomialOrder
from .poly import MultiPoly, PolyParseError, format_poly, parse, poly_ring

__all__ = [
    "Ideal",
    "MonomialOrder",
    "MultiPoly",
    "PolyParseError",
    "buchberger",
    "discriminant",
    "eliminate",
    "elimination_order",
    "format_poly",
    "is_groebner",
    "jacobian_ideal",
    "parse",
    "poly_ring",
    "reduce",
    "s_polynomial",
]
