"""Exception hierarchy shared by every module of the package."""


class HKError(Exception):
    """Base class for all errors raised by hkelliptic."""


class InvalidInput(HKError, ValueError):
    pass


# fields

class DivisionByZero(HKError, ZeroDivisionError):
    pass


class CtxMismatch(HKError, ValueError):
    pass


class NotPrime(InvalidInput):
    pass


class DegreeTooLarge(InvalidInput):
    pass


# graded algebra

class NotPPower(InvalidInput):
    pass


class HilbertMismatch(HKError):
    """dim R_m differs from delta*m: the presentation is not a normal genus-1 cone."""


class BoundExceeded(HKError):
    pass


# oracle

class NotStandardGraded(InvalidInput):
    pass


class StopBoundExceeded(HKError):
    """Colength did not vanish before the safety degree (ideal not primary?)."""


class NoMultiplicity(HKError):
    pass


# formulas

class DecompositionInconsistent(InvalidInput):
    pass


class H1Unresolved(HKError):
    """An h^1 correction term is needed but no value was supplied."""


class NonIntegralLength(HKError):
    pass


# curves / classifier

class NotACubic(InvalidInput):
    pass


class SingularCurve(HKError):
    pass


class RankTooSmall(InvalidInput):
    pass


class UnorderedSlopes(InvalidInput):
    pass
