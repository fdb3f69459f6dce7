"""Exception types raised across the package."""


class MldoError(Exception):
    """Base class for every computation error raised by this package."""


class DivisionByZero(MldoError, ZeroDivisionError):
    pass


class ZeroLeadingTerm(MldoError):
    pass


class NonComputablePower(MldoError):
    pass


class GridOverflow(MldoError):
    pass


class InsufficientTruncation(MldoError):
    pass


class UnderDetermined(InsufficientTruncation):
    pass


class NoFit(MldoError):
    pass


class NotHomogeneous(MldoError):
    pass


class NotMonicTop(MldoError):
    pass


class OrderMismatch(MldoError):
    pass


class NotACommonDivisor(MldoError):
    pass


class NotDivisible(MldoError):
    pass


class DivisionByZeroOperator(MldoError, ZeroDivisionError):
    pass


class BothZero(MldoError):
    pass


class ZeroOperator(MldoError):
    pass


class PreconditionViolated(MldoError):
    pass


class WeightNotRealizable(MldoError):
    pass


class RootSumMismatch(MldoError):
    pass


class EmptyIntersection(MldoError):
    pass


class WeightBoundViolated(MldoError):
    pass


class IrrationalRoots(MldoError):
    pass


class ResonantRoots(MldoError):
    pass


class RepeatedRoots(MldoError):
    pass


class ExponentsNotDistinct(MldoError):
    pass


class RecognitionFailed(MldoError):
    pass


class UnsupportedWeight(MldoError):
    pass


class ParseError(MldoError):
    """Malformed expression text; ``position`` is a 0-based column."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position})"
        super().__init__(message)


class WeightError(MldoError):
    pass
