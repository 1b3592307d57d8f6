"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, model invariant
violations -> 3, verification failures -> 4.
"""


class EdgeHodgeError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(EdgeHodgeError):
    """Matrix shapes disagree with the declared grading."""


class ChainMapError(EdgeHodgeError):
    """A would-be chain map fails to commute with the differentials."""


class UnverifiedComplexError(EdgeHodgeError):
    """Operation requires d*d = 0 but the complex fails it."""


class ModelInvariantError(EdgeHodgeError):
    """An edge-space model violates one of its structural invariants."""


class PerversityRangeError(EdgeHodgeError):
    """Perversity outside the range an operation accepts."""


class ConfigError(EdgeHodgeError):
    """Malformed run configuration or unknown catalogue name."""


class VerificationFailure(EdgeHodgeError):
    """An executable invariant suite reported a failing check."""


class EigensolverError(EdgeHodgeError):
    """Eigensolve did not meet its residual contract."""


class UnderResolvedSpectrumError(ModelInvariantError):
    """Zero-mode count at tolerance disagrees with the exact Betti number."""


class QuadratureError(EdgeHodgeError):
    """Sampled-profile quadrature failed its self-consistency check."""


class InconclusiveSlopeError(EdgeHodgeError):
    """Fitted decay exponent too close to zero to decide membership."""


class StiffnessFailureError(EdgeHodgeError):
    """Indicial exponents too close to a double root for reliable recovery."""
