"""Identity suites shared by the command line and the test-suite.

Exact suites compare truncated q-series with zero tolerance.  Numeric
suites draw random rational parameters from a seeded generator and
compare two independent evaluations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .hyperg import (
    HypParams,
    contiguous_check,
    cubic_transform_check,
    gauss_sum,
    pfq_at_one,
    watson_sum,
)
from .lvalue import jacobian_residual, parametrization_residual, remark_splitting_residual
from .qseries import QExpansion
from .special import (
    PrecisionContext,
    RealValue,
    gamma_bracket_eval,
    multiplication_check,
    reflection_check,
)
from .theta import (
    BORWEIN_A,
    BORWEIN_B,
    BORWEIN_C,
    JACOBI2,
    JACOBI3,
    JACOBI4,
    theta_qexp,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    worst: float  # largest residual seen (0 for exact suites)
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "pass": self.passed,
            "cases": self.cases,
            "worst": self.worst,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# exact q-series suites
# ---------------------------------------------------------------------------

def _exact(name: str, lhs: QExpansion, rhs: QExpansion) -> SuiteResult:
    diff = lhs - rhs
    lead = diff.leading()
    detail = f"exact to O(q^{diff.order})" if lead is None else f"first mismatch at q^{lead[0]}"
    return SuiteResult(name, lead is None, 1, 0.0, detail)


def jacobi_identity(order) -> SuiteResult:
    t2, t3, t4 = (theta_qexp(k, 1, order) for k in (JACOBI2, JACOBI3, JACOBI4))
    return _exact("jacobi θ3⁴ = θ2⁴ + θ4⁴", t3**4, t2**4 + t4**4)


def theta3_theta4(order) -> SuiteResult:
    lhs = theta_qexp(JACOBI3, 1, order) * theta_qexp(JACOBI4, 1, order)
    rhs = theta_qexp(JACOBI4, 2, order) ** 2
    return _exact("θ3(q)θ4(q) = θ4²(q²)", lhs, rhs)


def _abc(order):
    return (theta_qexp(k, 1, order) for k in (BORWEIN_A, BORWEIN_B, BORWEIN_C))


def cubic_identity(order) -> SuiteResult:
    a, b, c = _abc(order)
    return _exact("cubic a³ = b³ + c³", a**3, b**3 + c**3)


def a_cubed_argument(order) -> SuiteResult:
    a, b, _ = _abc(order)
    return _exact("a(q³) = (a + 2b)/3", theta_qexp(BORWEIN_A, 3, order), (a + b * 2) * Fraction(1, 3))


def c_cubed_argument(order) -> SuiteResult:
    a, b, _ = _abc(order)
    return _exact("c(q³) = (a − b)/3", theta_qexp(BORWEIN_C, 3, order), (a - b) * Fraction(1, 3))


def b_cubed_relation(order) -> SuiteResult:
    a, b, _ = _abc(order)
    rhs = (a * a * b + a * b * b + b**3) * Fraction(1, 3)
    return _exact("b³(q³) = (a²b + ab² + b³)/3", theta_qexp(BORWEIN_B, 3, order) ** 3, rhs)


def remark_splitting(order) -> SuiteResult:
    diff = remark_splitting_residual(order)
    lead = diff.leading()
    detail = f"exact to O(q^{diff.order})" if lead is None else f"first mismatch at q^{lead[0]}"
    return SuiteResult("θ2θ3⁴θ4 = θ2θ4⁵ + θ2⁵θ4 (at q⁴)", lead is None, 1, 0.0, detail)


EXACT_SUITES: tuple[Callable[[object], SuiteResult], ...] = (
    jacobi_identity,
    theta3_theta4,
    cubic_identity,
    a_cubed_argument,
    c_cubed_argument,
    b_cubed_relation,
    remark_splitting,
)


def exact_suites(order) -> list[SuiteResult]:
    return [suite(order) for suite in EXACT_SUITES]


# ---------------------------------------------------------------------------
# randomized numeric suites
# ---------------------------------------------------------------------------

def _rat(rng: random.Random, lo: Fraction, hi: Fraction, dens=(2, 3, 4, 5, 6, 8, 9, 12)) -> Fraction:
    """A random rational strictly inside (lo, hi) with a small denominator."""
    while True:
        d = rng.choice(dens)
        n = rng.randint(int(lo * d), int(hi * d) + 1)
        x = Fraction(n, d)
        if lo < x < hi:
            return x


def _rel(x: RealValue, y: RealValue) -> RealValue:
    return abs(x - y) / abs(y)


def _collect(name: str, residuals: list, limit) -> SuiteResult:
    worst = max(residuals)
    return SuiteResult(name, bool(worst < limit), len(residuals), float(worst), f"limit {float(limit):.0e}")


def gauss_triples(rng: random.Random, count: int = 30):
    out = []
    while len(out) < count:
        a = _rat(rng, Fraction(0), Fraction(3))
        b = _rat(rng, Fraction(0), Fraction(3))
        c = a + b + _rat(rng, Fraction(1, 4), Fraction(2))
        out.append((a, b, c))
    return out


def watson_triples(rng: random.Random, count: int = 20):
    out = []
    while len(out) < count:
        a = _rat(rng, Fraction(0), Fraction(2))
        b = _rat(rng, Fraction(0), Fraction(2))
        c = _rat(rng, Fraction(0), Fraction(2))
        excess = (1 - a - b) / 2 + c
        if excess >= Fraction(1, 4) and 1 - a + 2 * c > 0 and 1 - b + 2 * c > 0:
            out.append((a, b, c))
    return out


def contiguous_sets(rng: random.Random, count: int = 20):
    out = []
    while len(out) < count:
        a, b, c = (_rat(rng, Fraction(0), Fraction(2)) for _ in range(3))
        e = _rat(rng, Fraction(1, 2), Fraction(3))
        # the a+1 member loses one unit of excess; keep at least 1/4 left
        f = a + b + c + 1 + _rat(rng, Fraction(1, 4), Fraction(2)) - e
        if f <= 0:
            continue
        z = rng.choice((Fraction(1, 2), Fraction(1)))
        out.append((a, b, c, e, f, z))
    return out


CUBIC_A = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2))
CUBIC_X = (Fraction(1, 10), Fraction(3, 10), Fraction(1, 2), Fraction(7, 10))


def gauss_suite(rng: random.Random, ctx: PrecisionContext, count: int = 30) -> SuiteResult:
    res = []
    for a, b, c in gauss_triples(rng, count):
        closed = gamma_bracket_eval(gauss_sum(a, b, c), ctx)
        numeric = pfq_at_one(HypParams.of([a, b], [c]), ctx).value
        res.append(_rel(numeric, closed))
    return _collect("gauss summation", res, ctx.mpf(10) ** -20)


def watson_suite(rng: random.Random, ctx: PrecisionContext, count: int = 20) -> SuiteResult:
    res = []
    for a, b, c in watson_triples(rng, count):
        closed = gamma_bracket_eval(watson_sum(a, b, c), ctx)
        numeric = pfq_at_one(HypParams.of([a, b, c], [(1 + a + b) / 2, 2 * c]), ctx).value
        res.append(_rel(numeric, closed))
    return _collect("watson summation", res, ctx.mpf(10) ** -20)


def contiguous_suite(rng: random.Random, ctx: PrecisionContext, count: int = 20) -> SuiteResult:
    res = [contiguous_check(*s, ctx) for s in contiguous_sets(rng, count)]
    return _collect("contiguous relation", res, ctx.mpf(10) ** -(ctx.target_digits - 5))


def cubic_suite(ctx: PrecisionContext) -> SuiteResult:
    res = [cubic_transform_check(a, x, ctx) for a in CUBIC_A for x in CUBIC_X]
    return _collect("cubic transformation", res, ctx.mpf(10) ** -(ctx.target_digits - 5))


def reflection_suite(rng: random.Random, ctx: PrecisionContext, count: int = 50) -> SuiteResult:
    res = []
    for _ in range(count):
        n = _rat(rng, Fraction(0), Fraction(1), dens=tuple(range(2, 40)))
        lhs, rhs = reflection_check(n, ctx)
        res.append(_rel(lhs, rhs))
    return _collect("gamma reflection", res, ctx.tol)


def multiplication_suite(rng: random.Random, ctx: PrecisionContext, count: int = 20) -> SuiteResult:
    res = []
    for i in range(count):
        z = _rat(rng, Fraction(0), Fraction(6), dens=tuple(range(2, 20)))
        lhs, rhs = multiplication_check(z, 2 + i % 2, ctx)
        res.append(_rel(lhs, rhs))
    return _collect("gamma multiplication", res, ctx.tol)


JACOBI_POINTS = tuple(Fraction(k, 100) for k in (2, 5, 8, 10, 15, 20, 25, 30, 40, 50))
JACOBIAN_POINTS = (Fraction(1, 20), Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(1, 2))


def parametrization_suite(family: str, ctx: PrecisionContext) -> SuiteResult:
    res = [parametrization_residual(family, q, ctx) for q in JACOBI_POINTS]
    return _collect(f"{family} parametrization", res, ctx.mpf(10) ** -(ctx.target_digits - 5))


def jacobian_suite(family: str, ctx: PrecisionContext) -> SuiteResult:
    res = [jacobian_residual(family, q, ctx) for q in JACOBIAN_POINTS]
    return _collect(f"{family} jacobian", res, ctx.mpf(10) ** -10)


def numeric_suites(seed: int, ctx: PrecisionContext) -> list[SuiteResult]:
    rng = random.Random(seed)
    return [
        gauss_suite(rng, ctx),
        watson_suite(rng, ctx),
        contiguous_suite(rng, ctx),
        cubic_suite(ctx),
        reflection_suite(rng, ctx),
        multiplication_suite(rng, ctx),
        parametrization_suite("jacobi", ctx),
        parametrization_suite("borwein", ctx),
        jacobian_suite("jacobi", ctx),
        jacobian_suite("borwein", ctx),
    ]
