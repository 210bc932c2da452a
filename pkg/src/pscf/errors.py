"""Exception hierarchy shared by all pscf modules."""


class PscfError(Exception):
    """Base class for every error raised by pscf."""


# power sums
class ZeroRoot(PscfError, ValueError):
    pass


class UnitMismatch(PscfError, ValueError):
    pass


class ZeroPowerSum(PscfError, ValueError):
    pass


class NegativeRoot(PscfError, ValueError):
    pass


class ParseError(PscfError, ValueError):
    """Malformed power-sum text; carries the 1-based column of the fault."""

    def __init__(self, message, text="", column=0, line=1):
        self.text = text
        self.column = column
        self.line = line
        super().__init__(f"line {line}, column {column}: {message}")


# continued fractions
class PerfectSquare(PscfError, ValueError):
    pass


class StepBudgetExceeded(PscfError, RuntimeError):
    pass


class NonPositiveTail(PscfError, ValueError):
    pass


# approximation
class NegativeLeading(PscfError, ValueError):
    pass


class PrecisionExhausted(PscfError, RuntimeError):
    pass


# hypothesis
class SquarePowerSum(PscfError, ValueError):
    pass


# recurrence fitting
class FitError(PscfError, ValueError):
    """Any reason a sample could not be fitted by a power sum."""


class NoRecurrence(FitError):
    pass


class RepeatedRoot(FitError):
    pass


class NonIntegerRoot(FitError):
    pass


class Inconsistent(FitError):
    pass


class HoldoutMismatch(FitError):
    pass


class NonIntegerCoefficient(FitError):
    pass


# lab
class NonIntegerValue(PscfError, ValueError):
    pass


class FitFailed(PscfError):
    def __init__(self, index, reason):
        self.index = index
        self.reason = reason
        super().__init__(f"partial quotient a_{index}(m) not fitted: {reason}")


class MembershipFailed(PscfError):
    def __init__(self, m, a0, eta):
        self.m = m
        super().__init__(f"m={m}: floor sqrt = {a0} not in {{{eta}, {eta - 1}}}")


class ConfigError(PscfError, ValueError):
    pass


class NotStabilized(PscfError):
    """No constant period length at the top of the scanned range."""
