"""Exception types raised by the library."""


class HBubbleError(Exception):
    """Base class for all library errors."""


class DegenerateMoebius(HBubbleError):
    """The Moebius reparameterization hits its pole."""


class QuadratureNotConverged(HBubbleError):
    """Two resolutions of a quadrature disagree beyond tolerance."""


class UnknownIdentity(HBubbleError, KeyError):
    """Requested catalog entry does not exist."""


class NotInTable(HBubbleError, KeyError):
    """Robin value requested that has no tabulated closed form."""


class NearBoundary(HBubbleError, ValueError):
    """Point too close to the unit circle for spectral extension."""


class TruncationNotConverged(HBubbleError):
    """Doubling the Fourier truncation changed the result too much."""


class InvalidAdaptation(HBubbleError, ValueError):
    """Adapted quadrature requested around a point outside the disk."""


class BubblesTooClose(HBubbleError, ValueError):
    """Two bubble centers are closer than the admissible separation."""


class OutOfRange(HBubbleError, ValueError):
    """Numeric input outside the supported range."""


class DegenerateAxis(HBubbleError):
    """Rotation axis is undefined for the requested sphere center."""


class MaxIterations(HBubbleError):
    """Iterative solver exhausted its iteration budget."""


class SingularHessian(HBubbleError):
    """Hessian could not be factorized even after regularization."""


class LeftBox(HBubbleError):
    """Solver iterate was pushed against the admissible box."""


class InsufficientData(HBubbleError, ValueError):
    """Not enough samples to fit the requested model."""
