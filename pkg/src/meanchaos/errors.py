"""Exception types shared across the package."""


class DomainError(ValueError):
    """An index, horizon or parameter lies outside where a model is defined."""


class CapabilityError(NotImplementedError):
    """The requested quantity has no implementation for this operator kind."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
