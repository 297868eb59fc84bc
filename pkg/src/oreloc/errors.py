"""Exception hierarchy shared by every layer of the kernel.

The CLI maps these onto exit codes: input errors -> 2, resource errors -> 3.
"""

from __future__ import annotations


class AlgebraError(Exception):
    """Base class for all errors raised by :mod:`oreloc`."""


class InputError(AlgebraError):
    """Bad input: malformed text, mismatched rings, unsupported options."""


class ResourceError(AlgebraError):
    """A configured bound (budget, degree cap, precision) was hit."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class RingMismatch(InputError, TypeError):
    pass


class UnsupportedAutomorphism(InputError, ValueError):
    pass


class GroupMismatch(InputError, TypeError):
    pass


class ExprSyntaxError(InputError, ValueError):
    """Parse failure; ``position`` is the 0-based offset into the input text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownSymbol(InputError, ValueError):
    pass


class SingularMatrix(AlgebraError, ValueError):
    pass


class NotAnnihilating(InputError, ValueError):
    pass


class ZeroSeries(AlgebraError, ZeroDivisionError):
    pass


class DegreeOverflow(ResourceError):
    pass


class SearchBudgetExceeded(ResourceError):
    """Exhaustive search ran out of budget.

    ``lower``/``upper`` bracket the quantity being searched for, as far as
    the search got before stopping.
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class NotStabilized(ResourceError):
    def __init__(self, s_max: int, values: list[int]):
        super().__init__(f"rank sequence still decreasing at s_max={s_max}: {values}")
        self.s_max = s_max
        self.values = values


class FrontierTooTight(ResourceError):
    pass
