"""Exception hierarchy shared by every module of the package."""


class SliceError(Exception):
    """Base class for all errors raised by slicecauchy."""


class AlgebraError(SliceError, ValueError):
    """Malformed algebra description (schema, unit axiom, involution square)."""


class AlgebraMismatchError(SliceError, ValueError):
    """Operands belong to different algebras."""


class SizeError(SliceError, ValueError):
    """Requested algebra exceeds the configured dimension cap."""


class ConeError(SliceError, ValueError):
    """Element is outside the quadratic cone where cone membership is required."""


class ExhaustionError(SliceError, RuntimeError):
    """Rejection sampling of square roots of -1 gave up."""


class DomainError(SliceError, ValueError):
    """Evaluation point lies outside the domain of a stem or slice function."""


class PoleError(SliceError, ZeroDivisionError):
    """Evaluation hit (or came too close to) a pole."""


class GeometryError(SliceError, ValueError):
    """Contour/point configuration not admissible for the requested quadrature."""


class CapabilityError(SliceError, NotImplementedError):
    """Operation unsupported for this input (no derivative hook, no radial extent, ...)."""


class StemSymmetryError(SliceError, ValueError):
    """A sampled stem violates F(conj z) = conj F(z)."""
