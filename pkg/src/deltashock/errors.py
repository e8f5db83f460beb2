"""Exception types shared across the package."""


class DeltaShockError(Exception):
    """Base class for all package-specific errors."""


class DegenerateJump(DeltaShockError):
    """The jump in the carrier's conjugate variable vanishes; speed undefined."""


class NonHyperbolicError(DeltaShockError):
    """Flux Jacobian has complex eigenvalues at the requested state."""


class DomainError(DeltaShockError):
    """Curve evaluated outside its validity interval."""


class NoBracket(DeltaShockError):
    """Grid scan found no sign change for the requested root."""


class NoIntersection(DeltaShockError):
    """Forward and backward wave curves do not intersect in the admissible range."""


class OrderingViolation(DeltaShockError):
    """Wave speeds in an assembled fan are not monotone."""


class RegimeError(DeltaShockError):
    """Requested construction outside the regime it is defined for."""


class QuadratureError(DeltaShockError):
    """Quadrature failed to converge; the achieved estimate is attached."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class InstabilityError(DeltaShockError):
    """Viscous time stepper produced non-finite values."""

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time
