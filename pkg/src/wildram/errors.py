"""Exception hierarchy shared by all modules."""


class WildramError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(WildramError):
    pass


class DivisionByZero(WildramError):
    pass


class NotAPthPower(WildramError):
    pass


class UnknownVariable(WildramError):
    pass


class ZeroInverse(WildramError):
    """Inversion of a series with no certified nonzero coefficient."""


class PrecisionExhausted(WildramError):
    """An operation cannot certify the coefficients it needs.

    Conductors are integers; a wrong coefficient is a wrong answer, so any
    operation that would have to guess raises this instead of truncating
    silently.
    """


class InvalidBindingValuation(WildramError):
    pass


class NotWildlyRamified(WildramError):
    pass


class InternalInjectivityViolation(WildramError):
    """The graded class of a supposedly reduced representative vanished.

    This signals a bug in the reduction algorithm (or a genuine
    counterexample to minimality of reduced representatives) and must
    never be swallowed.
    """


class UnsupportedCase(WildramError):
    """The brute-force ramification oracle cannot handle this input."""


class NonIntegralConductor(WildramError):
    pass


class WildBaseChangeUnsupported(WildramError):
    pass
