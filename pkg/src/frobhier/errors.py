"""Exception hierarchy shared by all modules."""


class FrobHierError(Exception):
    """Base class for every error raised by this package."""


class ClosednessViolation(FrobHierError):
    """A would-be gradient has non-symmetric mixed partials."""

    def __init__(self, alpha, beta):
        super().__init__(f"d_{beta} g_{alpha} != d_{alpha} g_{beta}")
        self.alpha = alpha
        self.beta = beta


class CapMismatch(FrobHierError):
    pass


class NonNilpotentArgument(FrobHierError):
    pass


class BadConstantTerm(FrobHierError):
    pass


class NonConstantMetric(FrobHierError):
    pass


class SingularMetric(FrobHierError):
    pass


class OutOfStabilizationRange(FrobHierError):
    pass


class InvalidDimension(FrobHierError):
    pass
