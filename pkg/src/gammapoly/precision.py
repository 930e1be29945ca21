"""Working-precision plumbing shared by the numeric engines.

Every numeric operation takes an explicit PrecisionContext carrying the
target decimal digits plus guard digits; internally routines may boost the
working precision further (cancellation, oscillation) but results are only
certified to ``digits``.
"""

from dataclasses import dataclass

import mpmath
from mpmath import mp


class PrecisionError(ArithmeticError):
    """A result cannot be certified at the requested precision."""


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 50
    guard: int = 20

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError("digits must be >= 10")
        if self.guard < 0:
            raise ValueError("guard must be >= 0")

    @property
    def working_dps(self) -> int:
        return self.digits + self.guard

    def workdps(self, extra: int = 0):
        """Context manager setting mpmath working precision (plus extra digits)."""
        return mpmath.workdps(self.working_dps + max(0, extra))

    def tol(self, drop: int = 0):
        """10^-(digits - drop) as an mpf."""
        return mp.mpf(10) ** (-(self.digits - drop))


def to_str(x, digits: int) -> str:
    """Decimal-string form used everywhere numbers leave the library."""
    return mp.nstr(x, digits, strip_zeros=False)
