class FanoForgeError(Exception):
    """Base class for errors raised by this package."""


class DegeneratePolytopeError(FanoForgeError, ValueError):
    pass


class NotInteriorError(FanoForgeError, ValueError):
    """The origin is not a strict interior point where one is required."""


class NotLatticeError(FanoForgeError, ValueError):
    """A construction that should produce lattice data produced rationals."""


class ResourceError(FanoForgeError, RuntimeError):
    """An enumeration bound or step budget was exceeded."""


class ShapeError(FanoForgeError, ValueError):
    """Input does not have the shape an operation recognises."""


class InvariantError(FanoForgeError, AssertionError):
    """An internal invariant failed; indicates a bug, not bad input."""
