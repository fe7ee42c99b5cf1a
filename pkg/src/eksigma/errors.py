"""Exception types shared across the package."""


class EkError(Exception):
    """Base class for all package errors."""


class DomainError(EkError, ValueError):
    """An argument is outside the mathematical domain of the function."""


class CapacityError(EkError, RuntimeError):
    """The request would exceed a hard resource or representability limit."""


class IllConditionedError(EkError, ArithmeticError):
    """A computation lost too much precision to certify its error bound."""


class ThresholdNotFound(EkError, RuntimeError):
    """A threshold scan exhausted its search range without stabilizing."""

    def __init__(self, r, q_max, last_failure):
        self.r = r
        self.q_max = q_max
        self.last_failure = last_failure
        super().__init__(
            f"no stable threshold for r={r} below q_max={q_max}; "
            f"largest failing prime seen: {last_failure}"
        )
