"""Truncated q-expansions with exact rational coefficients.

A :class:`QExpansion` stores the coefficient of ``q**(i/denom)`` at index
``i`` as ``nums[i] / den``: one common positive denominator for the whole
series keeps multiplication a pure integer convolution.  Products are
computed exactly by Kronecker substitution (pack the integer coefficients
into one big integer, multiply, unpack), which keeps order-4096 identity
checks at desk-scale runtimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import TruncationError
from .special import as_fraction


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _pack(coeffs: list[int], nbytes: int) -> int:
    zero = bytes(nbytes)
    pos = b"".join(c.to_bytes(nbytes, "little") if c > 0 else zero for c in coeffs)
    neg = b"".join((-c).to_bytes(nbytes, "little") if c < 0 else zero for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def convolve(a: list[int], b: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer polynomials."""
    out_len = min(n, len(a) + len(b) - 1) if a and b else 0
    if out_len <= 0:
        return [0] * n
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    if ma == 0 or mb == 0:
        return [0] * n
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    # only the first out_len digits matter
    prod = _pack(a[:out_len], nbytes) * _pack(b[:out_len], nbytes)
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes(half.to_bytes(nbytes, "little") * out_len, "little")
    low = (prod + offset) & ((1 << (8 * nbytes * out_len)) - 1)
    raw = low.to_bytes(nbytes * out_len, "little")
    out = [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(out_len)
    ]
    out.extend([0] * (n - out_len))
    return out


@dataclass(frozen=True, eq=False)
class QExpansion:
    """Series in q, exact for every exponent below ``order``."""

    denom: int
    nums: tuple[int, ...]
    den: int
    order: Fraction

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, denom: int, nums, den: int, order) -> "QExpansion":
        """Normalize: reduce the coefficient gcd and the exponent denominator."""
        order = as_fraction(order)
        if order < 0:
            raise ValueError("order must be nonnegative")
        length = _ceil(order * denom)
        nums = list(nums[:length]) + [0] * max(0, length - len(nums))
        if den < 0:
            den, nums = -den, [-c for c in nums]
        g = math.gcd(den, *nums) if nums else den
        if g > 1:
            den //= g
            nums = [c // g for c in nums]
        e = math.gcd(denom, *(i for i, c in enumerate(nums) if c))
        if 1 < e:
            denom //= e
            nums = nums[::e]
        return cls(denom, tuple(nums), den, order)

    @classmethod
    def from_terms(cls, terms: Mapping, order) -> "QExpansion":
        """Series from ``{exponent: coefficient}``; terms at or past order are dropped."""
        order = as_fraction(order)
        items = [(as_fraction(e), as_fraction(c)) for e, c in terms.items()]
        denom = math.lcm(1, *(e.denominator for e, _ in items))
        den = math.lcm(1, *(c.denominator for _, c in items))
        nums = [0] * _ceil(order * denom)
        for e, c in items:
            if e < 0:
                raise ValueError("negative exponents are not supported")
            if e < order:
                nums[int(e * denom)] += c.numerator * (den // c.denominator)
        return cls.build(denom, nums, den, order)

    @classmethod
    def constant(cls, c, order) -> "QExpansion":
        return cls.from_terms({0: c}, order)

    # -- helpers ----------------------------------------------------------

    def _spread(self, denom: int, order: Fraction) -> list[int]:
        """Numerators re-indexed for exponent denominator ``denom``."""
        step = denom // self.denom
        out = [0] * _ceil(order * denom)
        src = self.nums[: _ceil(order * self.denom)]
        out[: len(src) * step: step] = src
        return out

    def _aligned(self, other: "QExpansion"):
        denom = math.lcm(self.denom, other.denom)
        order = min(self.order, other.order)
        return denom, order, self._spread(denom, order), other._spread(denom, order)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "QExpansion") -> "QExpansion":
        return qs_add(self, other)

    def __neg__(self) -> "QExpansion":
        return QExpansion(self.denom, tuple(-c for c in self.nums), self.den, self.order)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return qs_add(self, -other)

    def __mul__(self, other) -> "QExpansion":
        if isinstance(other, QExpansion):
            return qs_mul(self, other)
        c = as_fraction(other)
        return QExpansion.build(
            self.denom, [x * c.numerator for x in self.nums], self.den * c.denominator, self.order
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QExpansion":
        return qs_pow(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def coeff(self, n) -> Fraction:
        return qs_coeff(self, n)

    def terms(self) -> Iterator[tuple[Fraction, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent."""
        for i, c in enumerate(self.nums):
            if c:
                yield Fraction(i, self.denom), Fraction(c, self.den)

    def valuation(self) -> Fraction | None:
        for e, _ in self.terms():
            return e
        return None

    def leading(self) -> tuple[Fraction, Fraction] | None:
        for t in self.terms():
            return t
        return None

    def truncate(self, order) -> "QExpansion":
        order = min(as_fraction(order), self.order)
        return QExpansion.build(self.denom, self.nums, self.den, order)

    def __repr__(self):
        shown = []
        for e, c in self.terms():
            shown.append(f"{c}*q^{e}")
            if len(shown) == 8:
                shown.append("...")
                break
        body = " + ".join(shown) or "0"
        return f"QExpansion({body}; O(q^{self.order}))"


def qs_add(a: QExpansion, b: QExpansion) -> QExpansion:
    denom, order, x, y = a._aligned(b)
    den = math.lcm(a.den, b.den)
    fa, fb = den // a.den, den // b.den
    return QExpansion.build(denom, [u * fa + v * fb for u, v in zip(x, y)], den, order)


def qs_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    denom, order, x, y = a._aligned(b)
    return QExpansion.build(denom, convolve(x, y, len(x)), a.den * b.den, order)


def qs_pow(a: QExpansion, k: int) -> QExpansion:
    if k < 1:
        raise ValueError("qs_pow needs k >= 1")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else qs_mul(result, base)
        k >>= 1
        if k:
            base = qs_mul(base, base)
    return result


def qs_scale_arg(a: QExpansion, k: int) -> QExpansion:
    """Substitute q -> q**k."""
    if k < 1:
        raise ValueError("qs_scale_arg needs k >= 1")
    order = a.order * k
    nums = [0] * _ceil(order * a.denom)
    nums[:: k] = a.nums[: len(nums[::k])]
    return QExpansion.build(a.denom, nums, a.den, order)


def qs_coeff(a: QExpansion, n) -> Fraction:
    n = as_fraction(n)
    if n >= a.order:
        raise TruncationError(f"exponent {n} is not below the truncation order {a.order}")
    if n < 0:
        return Fraction(0)
    i = n * a.denom
    if i.denominator != 1:
        return Fraction(0)
    return Fraction(a.nums[int(i)], a.den)
