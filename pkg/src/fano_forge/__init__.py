"""Exact verification toolkit for toric Fano threefolds and their smoothings."""

from .errors import (
    DegeneratePolytopeError,
    FanoForgeError,
    InvariantError,
    NotInteriorError,
    NotLatticeError,
    ResourceError,
    ShapeError,
)
from .exactla import IntMatrix, hnf, snf
from .fan import Cone, Fan, face_fan, normal_fan
from .polyring import Ideal, MonomialOrder, MultiPoly, parse
from .polytope import LatticePolytope

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "DegeneratePolytopeError",
    "Fan",
    "FanoForgeError",
    "Ideal",
    "IntMatrix",
    "InvariantError",
    "LatticePolytope",
    "MonomialOrder",
    "MultiPoly",
    "NotInteriorError",
    "NotLatticeError",
    "ResourceError",
    "ShapeError",
    "face_fan",
    "hnf",
    "normal_fan",
    "parse",
    "snf",
]
