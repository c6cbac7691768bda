"""Exception types shared across the library."""


class NevaiError(Exception):
    """Base class for all library errors."""


class DomainError(NevaiError):
    """An argument lies outside the square [-1, 1] x [-1, 1] or an allowed range."""


class DegenerateDenominatorError(NevaiError):
    """The weight-system denominator underflowed to zero at some evaluation point.

    Carries the offending point so callers can report where the weight
    mass vanished instead of silently propagating NaN.
    """

    def __init__(self, z):
        self.z = z
        super().__init__(f"weight denominator underflowed to 0 at z = {z}")


class MissingDerivativesError(NevaiError):
    """A Taylor-based evaluation was requested for a field without derivative data."""


class PairingError(NevaiError):
    """The requested operator family cannot be used with the given function."""


class UnknownFunctionError(NevaiError):
    """No built-in function is registered under the requested id."""


class ShapeMismatchError(NevaiError):
    """Two grids or images that must share a shape do not."""


class NonFiniteIntegrandError(NevaiError):
    """A cell integrand returned NaN or infinity."""
