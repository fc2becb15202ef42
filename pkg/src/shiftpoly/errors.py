"""Exception hierarchy shared by every module."""


class ShiftPolyError(Exception):
    """Base class for all library errors."""


class InvalidInput(ShiftPolyError, ValueError):
    """Malformed argument or document (schema violation, bad modulus, ...)."""


class CtxMismatch(ShiftPolyError, ValueError):
    pass


class DimensionMismatch(ShiftPolyError, ValueError):
    pass


class ArityMismatch(ShiftPolyError, ValueError):
    pass


class DivisionByZero(ShiftPolyError, ZeroDivisionError):
    pass


class DivisionByZeroPoly(DivisionByZero):
    pass


class SingularMatrix(ShiftPolyError, ValueError):
    pass


class DependentFrame(ShiftPolyError, ValueError):
    pass


class EmptyCombo(ShiftPolyError, ValueError):
    pass


class OutOfRange(ShiftPolyError, ValueError):
    pass


class NotMaximal(ShiftPolyError, ValueError):
    pass


class FamilyTooSmall(ShiftPolyError, ValueError):
    pass


class HypothesisViolation(ShiftPolyError, ValueError):
    pass


class EvenCharacteristic(ShiftPolyError, ValueError):
    pass


class EmptyInput(ShiftPolyError, ValueError):
    pass


class NotKakeya(ShiftPolyError, ValueError):
    pass


class DegreeTooLarge(ShiftPolyError, ValueError):
    pass


class TooLarge(ShiftPolyError):
    """A desk-scale guard refused to run a computation."""


class GuardTripped(TooLarge):
    pass


class InternalContradiction(ShiftPolyError, AssertionError):
    """A proven statement failed on concrete data; indicates a defect."""


class NotUnimodal(UserWarning):
    """Grid pre-scan saw more than one local minimum; a fallback was used."""
