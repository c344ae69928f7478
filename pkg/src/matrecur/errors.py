"""Exception hierarchy shared by every module."""


class RecurrenceError(ValueError):
    """Base class for all errors raised by matrecur."""


class EmptySet(RecurrenceError):
    pass


class NonPositiveEntry(RecurrenceError):
    pass


class SingletonSet(RecurrenceError):
    pass


class PeriodicSet(RecurrenceError):
    """The index set has gcd > 1 where a gcd-one set is required."""


class IndexOutOfRange(RecurrenceError):
    pass


class BudgetExceeded(RecurrenceError):
    pass


class DimensionMismatch(RecurrenceError):
    pass


class SizeOverflow(RecurrenceError):
    pass


class ConvergenceFailure(RecurrenceError):
    pass


class ZeroNormInput(RecurrenceError):
    pass


class NotConsecutive(RecurrenceError):
    pass


class NotScalar(RecurrenceError):
    pass


class NumericOverflow(RecurrenceError):
    pass
