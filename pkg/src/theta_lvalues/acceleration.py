"""Levin u-transform for slowly (logarithmically) convergent series.

Used only as a cross-check path: its estimates are compared against the
integral-representation values and never become the value of record.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .special import PrecisionContext, RealValue


@dataclass(frozen=True)
class AccelResult:
    value: RealValue
    error: RealValue  # |difference| of the last two transforms
    terms: int


def levin_u(partial_sums, terms, k: int, mp, beta: int = 1) -> RealValue:
    """Levin u-transform of order ``k`` from the first ``k + 1`` partial sums.

    ``terms[j]`` is the j-th summand, ``partial_sums[j]`` the sum through it.
    """
    num = mp.zero
    den = mp.zero
    binom = 1
    scale = mp.mpf(beta + k)
    for j in range(k + 1):
        omega = (beta + j) * terms[j]
        c = binom * mp.power((beta + j) / scale, k - 1) / omega
        if j % 2:
            c = -c
        num += c * partial_sums[j]
        den += c
        binom = binom * (k - j) // (j + 1)
    return num / den


def accelerate(
    make_terms: Callable[[object], Iterator[RealValue]],
    ctx: PrecisionContext,
    digits: int,
    *,
    max_terms: int = 120,
    extra_digits: int | None = None,
) -> AccelResult:
    """Sum the series whose terms ``make_terms(mp)`` yields, by Levin u.

    The factory receives the (raised-precision) mpmath context so the terms
    are produced at the precision the transform needs; the binomial weights
    cost roughly ``0.3 * k`` digits of cancellation.
    """
    if extra_digits is None:
        extra_digits = max(30, digits)
    mp = ctx.raised(extra_digits).mp
    goal = mp.mpf(10) ** (-digits)

    terms = []
    sums = []
    s = mp.zero
    prev = None
    prev_diff = None
    source = make_terms(mp)
    for n in range(max_terms):
        t = next(source)
        s += t
        terms.append(t)
        sums.append(s)
        k = n
        if k < 6 or k % 2:
            continue
        est = levin_u(sums, terms, k, mp)
        if prev is not None:
            diff = abs(est - prev)
            if diff <= goal * abs(est) and prev_diff is not None and prev_diff <= goal * 10 * abs(est):
                return AccelResult(ctx.mpf(est), ctx.mpf(diff), n + 1)
            prev_diff = diff
        prev = est
    return AccelResult(ctx.mpf(prev), ctx.mpf(prev_diff), max_terms)
