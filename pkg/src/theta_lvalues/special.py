"""Precision bookkeeping, the Gamma function and Gamma brackets.

Every numeric routine takes an explicit :class:`PrecisionContext`.  The
context owns a private :class:`mpmath.MPContext`, so nothing here touches
mpmath's global precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath
from mpmath.ctx_mp_python import _mpf

from .errors import DomainError

Rational = Union[int, Fraction]
# Values are mpf numbers created by ``ctx.mp``; ``x.context`` identifies
# the precision they were computed under.  Each MPContext has its own mpf
# subclass, so isinstance checks go against the shared base.
RealValue = _mpf


@lru_cache(maxsize=None)
def _mp_context(dps: int) -> mpmath.MPContext:
    mp = mpmath.MPContext()
    mp.dps = dps
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    """Target digits for verification plus guard digits for the arithmetic."""

    target_digits: int = 30
    guard_digits: int = 15
    working_digits: int = 0

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be at least 10")
        minimum = self.target_digits + self.guard_digits
        if self.working_digits == 0:
            object.__setattr__(self, "working_digits", minimum)
        elif self.working_digits < minimum:
            raise ValueError(
                f"working_digits={self.working_digits} < target+guard={minimum}"
            )

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.working_digits)

    @property
    def eps(self) -> RealValue:
        """Unit roundoff scale of the working precision."""
        return self.mp.mpf(10) ** (-self.working_digits)

    @property
    def tol(self) -> RealValue:
        """Relative tolerance that verification comparisons use."""
        return self.mp.mpf(10) ** (-self.target_digits)

    def mpf(self, x) -> RealValue:
        """Convert ints, Fractions, decimal strings or mpf values exactly."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)

    def raised(self, extra: int) -> "PrecisionContext":
        """Same target, ``extra`` more working digits."""
        return PrecisionContext(
            self.target_digits, self.guard_digits, self.working_digits + extra
        )


def default_context(digits: int = 30) -> PrecisionContext:
    return PrecisionContext(target_digits=digits, guard_digits=15)


def as_fraction(x) -> Fraction:
    """Parse ``3``, ``"1/4"``, ``"0.25"`` or a Fraction into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def gamma(x, ctx: PrecisionContext) -> RealValue:
    """Gamma function at a positive rational or real argument."""
    xv = ctx.mpf(x)
    if xv <= 0:
        raise DomainError(f"gamma is only supported for x > 0, got {x}")
    return ctx.mp.gamma(xv)


def reflection_check(n, ctx: PrecisionContext) -> tuple[RealValue, RealValue]:
    """Both sides of Γ(n)Γ(1−n) = π / sin(nπ) for 0 < n < 1."""
    mp = ctx.mp
    nv = ctx.mpf(n)
    if not 0 < nv < 1:
        raise DomainError("reflection check needs 0 < n < 1")
    lhs = gamma(nv, ctx) * gamma(1 - nv, ctx)
    rhs = mp.pi / mp.sinpi(nv)
    return lhs, rhs


def multiplication_check(z, n: int, ctx: PrecisionContext) -> tuple[RealValue, RealValue]:
    """Both sides of the Gauss multiplication formula for Γ(nz)."""
    mp = ctx.mp
    if n < 2:
        raise DomainError("multiplication formula needs n >= 2")
    zv = ctx.mpf(z)
    lhs = gamma(n * zv, ctx)
    rhs = mp.power(n, n * zv - mp.mpf(1) / 2) / mp.power(2 * mp.pi, mp.mpf(n - 1) / 2)
    for k in range(n):
        rhs *= gamma(zv + mp.mpf(k) / n, ctx)
    return lhs, rhs


def pochhammer(a, n: int, ctx: PrecisionContext | None = None):
    """Rising factorial (a)_n.

    Exact (a Fraction) when ``ctx`` is omitted and ``a`` is rational,
    otherwise an mpf at the context's working precision.
    """
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    if ctx is None:
        a = as_fraction(a)
        out = Fraction(1)
        for k in range(n):
            out *= a + k
        return out
    av = ctx.mpf(a)
    out = ctx.mp.mpf(1)
    for k in range(n):
        out *= av + k
    return out


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class GammaBracket:
    """Γ[num / den] = ∏ Γ(num) / ∏ Γ(den), all arguments positive rationals."""

    num: tuple[Fraction, ...] = ()
    den: tuple[Fraction, ...] = ()

    def __post_init__(self):
        num = tuple(sorted(as_fraction(x) for x in self.num))
        den = tuple(sorted(as_fraction(x) for x in self.den))
        for x in num + den:
            if x <= 0:
                raise DomainError(f"Gamma bracket argument {x} is not positive")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, num: Iterable = (), den: Iterable = ()) -> "GammaBracket":
        return cls(tuple(as_fraction(x) for x in num), tuple(as_fraction(x) for x in den))

    def cancel(self) -> "GammaBracket":
        """Drop arguments that appear in both numerator and denominator."""
        num = list(self.num)
        den = []
        for x in self.den:
            if x in num:
                num.remove(x)
            else:
                den.append(x)
        return GammaBracket(tuple(num), tuple(den))

    def __mul__(self, other: "GammaBracket") -> "GammaBracket":
        return GammaBracket(self.num + other.num, self.den + other.den).cancel()

    def __str__(self):
        num = ", ".join(map(_fmt, self.num)) or "1"
        den = ", ".join(map(_fmt, self.den))
        return f"Γ[{num} / {den}]" if den else f"Γ[{num}]"


def gamma_bracket_eval(gb: GammaBracket, ctx: PrecisionContext) -> RealValue:
    out = ctx.mp.mpf(1)
    for x in gb.num:
        out *= gamma(x, ctx)
    for x in gb.den:
        out /= gamma(x, ctx)
    return out


def agreed_digits(x, y, cap: int) -> int:
    """floor(−log10 |x−y|/|y|), capped at ``cap`` when the values coincide."""
    mp = x.context if hasattr(x, "context") else mpmath.mp
    diff = abs(x - y)
    scale = abs(y) if y != 0 else mp.mpf(1)
    if diff == 0:
        return cap
    d = -mp.log10(diff / scale)
    return max(0, min(cap, int(mp.floor(d))))
