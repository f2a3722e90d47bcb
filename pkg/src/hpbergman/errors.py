"""Exception hierarchy shared by every module."""


class BergmanError(Exception):
    """Base class for all errors raised by hpbergman."""


class DegenerateMap(BergmanError, ValueError):
    pass


class DomainViolation(BergmanError, ValueError):
    pass


class WeightMismatch(BergmanError, ValueError):
    pass


class NumericalInconsistency(BergmanError, ArithmeticError):
    pass


class IdentityMap(BergmanError, ValueError):
    pass


class Divergent(BergmanError, RuntimeError):
    pass


class PreconditionViolation(BergmanError, ValueError):
    pass


class NotKernelCompatible(BergmanError, ValueError):
    pass


class ImageOutsideHalfPlane(BergmanError, ValueError):
    pass


class ToleranceNotMet(BergmanError, RuntimeError):
    pass


class DecayViolation(BergmanError, ValueError):
    pass


class InternalConsistencyError(BergmanError, AssertionError):
    """A closed-form verdict was contradicted by an independent numerical check."""
