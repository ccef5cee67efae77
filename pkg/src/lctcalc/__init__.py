"""Exact critical integrability indices of plane curve germs."""

from .adapt import Field, LctResult, Normalization, compute_lct, lct
from .bivar import INFINITE, Axis, BivarPoly, ParseError, ShearTerm, parse, to_text
from .newton import face_polynomial, newton_distance, polygon

__all__ = [
    "Axis",
    "BivarPoly",
    "Field",
    "INFINITE",
    "LctResult",
    "Normalization",
    "ParseError",
    "ShearTerm",
    "compute_lct",
    "face_polynomial",
    "lct",
    "newton_distance",
    "parse",
    "polygon",
    "to_text",
]
