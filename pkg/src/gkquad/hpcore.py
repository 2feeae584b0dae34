"""Arbitrary-precision numeric contexts shared by every other module.

All numerical work in this package runs against an explicit
:class:`NumericContext` instead of a process-global precision setting.  A
context owns a private mpmath ``MPContext``, so two contexts never interact:
constructing a 400-digit context for one computation does not change the
rounding of a 100-digit computation running next to it, and repeating any
operation on a fresh context with the same ``digits`` reproduces the same
digit strings.

The working unit is the context's ``mpf`` type (binary floating point with
``digits`` decimal digits of working precision, round-to-nearest).  Integers
and decimal strings convert exactly or with a single correct rounding;
``Fraction`` inputs are converted via exact integer division.
"""

from __future__ import annotations

import fractions
import math

from mpmath.ctx_mp import MPContext

MIN_DIGITS = 30


class PrecisionError(ArithmeticError):
    """Raised when working precision cannot resolve a requested computation.

    ``suggested_digits``, when set, estimates the precision at which a retry
    is expected to succeed.
    """

    def __init__(self, message: str, suggested_digits: int | None = None):
        super().__init__(message)
        self.suggested_digits = suggested_digits


class ConvergenceError(RuntimeError):
    """Raised when an iterative kernel exhausts its iteration budget."""


class NumericContext:
    """Fixed-precision real arithmetic with an isolated mpmath context.

    Parameters
    ----------
    digits:
        Decimal digits of working precision.  Must be at least
        ``MIN_DIGITS`` (30); below that the cancellation-heavy error
        computations in this package are meaningless.
    """

    def __init__(self, digits: int):
        digits = int(digits)
        if digits < MIN_DIGITS:
            raise ValueError(
                f"digits must be >= {MIN_DIGITS}, got {digits}"
            )
        self.digits = digits
        mp = MPContext()
        mp.dps = digits
        self.mp = mp

    def __repr__(self) -> str:
        return f"NumericContext(digits={self.digits})"

    # -- conversions ----------------------------------------------------

    def real(self, x):
        """Convert ``x`` (int, str, Fraction, float, mpf) to this context."""
        if isinstance(x, fractions.Fraction):
            return self.mp.mpf(x.numerator) / self.mp.mpf(x.denominator)
        return self.mp.mpf(x)

    def reals(self, xs):
        """Convert an iterable of values, returning a tuple."""
        return tuple(self.real(x) for x in xs)

    # -- constants and tolerances ---------------------------------------

    @property
    def pi(self):
        return +self.mp.pi

    @property
    def e(self):
        return +self.mp.e

    def tolerance(self, drop: int = 0):
        """Return ``10**-(digits - drop)``.

        ``drop`` is the number of guard digits sacrificed; ``tolerance(0)``
        is one unit in the last displayed decimal place of a quantity of
        order one.
        """
        return self.mp.mpf(10) ** (-(self.digits - drop))

    def half_tolerance(self):
        """Return ``10**-(digits/2)``, the coarse threshold used to decide
        whether a tiny negative squared error is roundoff or a real
        precision failure."""
        return self.mp.mpf(10) ** (-self.mp.mpf(self.digits) / 2)

    # -- delegated operations -------------------------------------------
    # Thin pass-throughs so call sites read ctx.sqrt(x) instead of
    # ctx.mp.sqrt(x).  Only the operations this package uses.

    def sqrt(self, x):
        return self.mp.sqrt(x)

    def exp(self, x):
        return self.mp.exp(x)

    def log(self, x):
        return self.mp.log(x)

    def hypot(self, x, y):
        return self.mp.hypot(x, y)

    def fsum(self, terms):
        return self.mp.fsum(terms)

    def isfinite(self, x) -> bool:
        return self.mp.isfinite(x)

    def nstr(self, x, display_digits: int | None = None) -> str:
        if display_digits is None:
            display_digits = self.digits
        return self.mp.nstr(x, display_digits)


def make_context(digits: int) -> NumericContext:
    """Construct a :class:`NumericContext` with ``digits`` decimal digits."""
    return NumericContext(digits)


def factorial(n: int, ctx: NumericContext):
    """``n!`` as a context real, computed from the exact integer product."""
    if n < 0:
        raise ValueError(f"factorial of negative n={n}")
    return ctx.real(math.factorial(n))


def double_factorial(n: int) -> int:
    """Exact integer double factorial ``n!!`` with ``(-1)!! = 0!! = 1``.

    For even ``n = 2q`` this is ``2^q q!``; for odd ``n = 2q-1`` it is
    ``(2q)!/(2^q q!)``, the ``2q``-th moment of the standard normal.
    """
    if n < -1:
        raise ValueError(f"double factorial of n={n} < -1")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def binomial(n: int, k: int) -> int:
    """Exact integer binomial coefficient."""
    return math.comb(n, k)
