"""Generalized hypergeometric functions with rational parameters.

Values at z = 1 come from the Euler integral representation evaluated by
tanh-sinh quadrature; the inner 2F1 kernels are summed in fixed-point
integer arithmetic, switching to the z -> 1 - z connection formulas
(including the logarithmic cases) when the argument exceeds 1/2.  A Levin
accelerated direct series provides an independent, lower-accuracy cross
check.  Gauss and Watson summation return exact Gamma brackets.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath.libmp import to_fixed

from .acceleration import accelerate
from .errors import DivergenceError, DomainError, PatternError, PrecisionError
from .quadrature import tanh_sinh
from .special import (
    GammaBracket,
    PrecisionContext,
    RealValue,
    as_fraction,
    gamma_bracket_eval,
)

HALF = Fraction(1, 2)


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class HypParams:
    """Upper and lower parameters of a (p+1)F(p)."""

    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]

    def __post_init__(self):
        upper = tuple(as_fraction(x) for x in self.upper)
        lower = tuple(as_fraction(x) for x in self.lower)
        for b in lower:
            if _is_nonpos_int(b):
                raise DomainError(f"lower parameter {b} is a nonpositive integer")
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    @classmethod
    def of(cls, upper, lower) -> "HypParams":
        return cls(tuple(upper), tuple(lower))

    @property
    def excess(self) -> Fraction:
        """Σ lower − Σ upper; the series converges at z = 1 iff this is positive."""
        return sum(self.lower, Fraction(0)) - sum(self.upper, Fraction(0))

    @property
    def p(self) -> int:
        return len(self.lower)

    def reduced(self) -> "HypParams":
        """Cancel parameters appearing both upstairs and downstairs."""
        upper = list(self.upper)
        lower = []
        for b in self.lower:
            if b in upper:
                upper.remove(b)
            else:
                lower.append(b)
        return HypParams(tuple(upper), tuple(lower))

    def terminates(self) -> bool:
        return any(_is_nonpos_int(a) for a in self.upper)

    def __str__(self):
        up = ",".join(map(str, self.upper))
        lo = ",".join(map(str, self.lower))
        return f"{len(self.upper)}F{len(self.lower)}[{up}; {lo}]"


class Method(enum.Enum):
    DIRECT_SERIES = "DirectSeries"
    EULER_INTEGRAL = "EulerIntegral"
    ACCELERATED_SERIES = "AcceleratedSeries"
    CLOSED_FORM = "ClosedForm"


@dataclass(frozen=True)
class HypEvalReport:
    value: RealValue
    method: Method
    terms_or_nodes: int
    tail_bound: RealValue

    def as_dict(self, digits: int) -> dict:
        mp = self.value.context
        return {
            "value": mp.nstr(self.value, digits),
            "method": self.method.value,
            "terms_or_nodes": self.terms_or_nodes,
            "tail_bound": mp.nstr(self.tail_bound, 5),
        }


# ---------------------------------------------------------------------------
# fixed-point series kernels
# ---------------------------------------------------------------------------

def _bits(ctx: PrecisionContext) -> int:
    return int(ctx.working_digits * 3.33) + 40


def _to_fixed(x, prec: int) -> int:
    return to_fixed(x._mpf_, prec)


def _from_fixed(mp, v: int, prec: int) -> RealValue:
    return mp.ldexp(mp.mpf(v), -prec)


def _ratio_parts(upper, lower, n):
    """Integer numerator/denominator of t_{n+1}/t_n / z."""
    num = 1
    den = n + 1
    for a in upper:
        num *= a.numerator + n * a.denominator
        den *= a.denominator
    for b in lower:
        num *= b.denominator
        den *= b.numerator + n * b.denominator
    return num, den


def _ratio_bound(upper, lower, n: int, z_abs: float) -> float:
    """Bound on |t_{m+1}/t_m| for all m >= n (inf when unavailable yet)."""
    ups = sorted(upper)
    lows = sorted(list(lower) + [Fraction(1)])
    out = z_abs
    for a, b in zip(ups, lows):
        if a + n <= 0 or b + n <= 0:
            return float("inf")
        if a > b:
            out *= float((a + n) / (b + n))
    return out


def _fixed_series(upper, lower, Z: int, prec: int, n_max: int = 10**6):
    """Σ t_n in fixed point; returns (sum, terms used, last |term|, n)."""
    one = 1 << prec
    T = one
    S = one
    hump = int(max([abs(x) for x in upper + lower] + [Fraction(0)])) + 2
    for n in range(n_max):
        num, den = _ratio_parts(upper, lower, n)
        T = (T * Z) >> prec
        T = (T * num) // den if T >= 0 else -((-T * num) // den)
        if T == 0:
            return S, n + 1
        S += T
        if n > hump and abs(T) < 4:
            return S, n + 1
    raise PrecisionError("fixed-point hypergeometric series did not terminate")


def pfq_series(p: HypParams, z, ctx: PrecisionContext) -> HypEvalReport:
    """Direct summation for 0 <= z < 1 with a rigorous geometric tail bound."""
    mp = ctx.mp
    zv = ctx.mpf(z) if not isinstance(z, RealValue) else z
    if not -1 < zv < 1:
        raise DomainError(f"pfq_series needs |z| < 1, got {mp.nstr(zv, 10)}")
    if len(p.upper) != len(p.lower) + 1:
        raise DomainError("pfq_series expects a (p+1)F(p)")
    upper, lower = list(p.upper), list(p.lower)
    if zv == 0:
        return HypEvalReport(mp.one, Method.DIRECT_SERIES, 1, mp.zero)
    z_abs = float(abs(zv))
    eps = ctx.eps
    term = mp.one
    total = mp.one
    n = 0
    while True:
        num, den = _ratio_parts(upper, lower, n)
        term = term * zv * num / den
        n += 1
        total += term
        if term == 0:
            return HypEvalReport(total, Method.DIRECT_SERIES, n, mp.zero)
        if abs(term) <= eps * abs(total):
            rho = _ratio_bound(upper, lower, n, z_abs)
            if rho < 1:
                tail = abs(term) * mp.mpf(rho) / (1 - mp.mpf(rho))
                if tail <= eps * abs(total):
                    return HypEvalReport(total, Method.DIRECT_SERIES, n + 1, tail)
        if n > 10**6:
            raise PrecisionError("pfq_series: too many terms; use the integral route")


def _series_fast(upper, lower, x: RealValue, ctx: PrecisionContext) -> RealValue:
    prec = _bits(ctx)
    S, _ = _fixed_series(list(upper), list(lower), _to_fixed(x, prec), prec)
    return _from_fixed(ctx.mp, S, prec)


# ---------------------------------------------------------------------------
# 2F1 on [0, 1) via connection formulas
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _connection_coeffs(a: Fraction, b: Fraction, c: Fraction, dps: int):
    mp = PrecisionContext(working_digits=dps, target_digits=dps - 15).mp
    A, B, C = (mp.mpf(x.numerator) / x.denominator for x in (a, b, c))
    m = c - a - b
    if m.denominator != 1:
        first = mp.gamma(C) * mp.gamma(C - A - B) * mp.rgamma(C - A) * mp.rgamma(C - B)
        second = mp.gamma(C) * mp.gamma(A + B - C) * mp.rgamma(A) * mp.rgamma(B)
        return first, second
    m = int(m)
    finite = mp.zero
    if m >= 1:
        finite = mp.gamma(m) * mp.gamma(C) * mp.rgamma(A + m) * mp.rgamma(B + m)
    log_coeff = mp.gamma(C) * mp.rgamma(A) * mp.rgamma(B)
    if m % 2:
        log_coeff = -log_coeff
    psis = (mp.psi(0, 1), mp.psi(0, m + 1), mp.psi(0, A + m), mp.psi(0, B + m))
    return finite, log_coeff, psis


def _log_case(a, b, m: int, w: RealValue, ctx) -> RealValue:
    """2F1(a, b; a+b+m; 1−w) for integer m >= 0 (logarithmic connection)."""
    mp = ctx.mp
    c = a + b + m
    finite, log_coeff, psis = _connection_coeffs(a, b, c, ctx.working_digits)
    total = mp.zero
    if m >= 1:
        # Σ_{n<m} (a)_n (b)_n / (n! (1−m)_n) w^n
        t = mp.one
        for n in range(m):
            total += t
            if n + 1 < m:
                t = t * (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * w
        total *= finite
    prec = _bits(ctx)
    one = 1 << prec
    W = _to_fixed(w, prec)
    P = [_to_fixed(x, prec) for x in psis]
    A, B = a + m, b + m
    T = one
    for k in range(1, m + 1):  # 1 / m!
        T //= k
    S0 = 0
    S1 = 0
    hump = int(abs(A) + abs(B)) + 2
    n = 0
    while True:
        psi_comb = -P[0] - P[1] + P[2] + P[3]
        S0 += T
        S1 += (T * psi_comb) >> prec
        # advance to n + 1
        P[0] += one // (n + 1)
        P[1] += one // (n + m + 1)
        P[2] += (A.denominator << prec) // (A.numerator + n * A.denominator)
        P[3] += (B.denominator << prec) // (B.numerator + n * B.denominator)
        num = (A.numerator + n * A.denominator) * (B.numerator + n * B.denominator)
        den = A.denominator * B.denominator * (n + 1) * (n + m + 1)
        T = (T * W) >> prec
        T = (T * num) // den if T >= 0 else -((-T * num) // den)
        n += 1
        if T == 0 or (n > hump and abs(T) < 4):
            break
    series = mp.log(w) * _from_fixed(mp, S0, prec) + _from_fixed(mp, S1, prec)
    return total - log_coeff * mp.power(w, m) * series


def hyp2f1(a, b, c, x, ctx: PrecisionContext, xc=None) -> RealValue:
    """2F1(a, b; c; x) for rational parameters and 0 <= x < 1.

    ``xc`` may carry 1 − x computed without cancellation.
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    mp = ctx.mp
    if _is_nonpos_int(c):
        raise DomainError(f"lower parameter {c} is a nonpositive integer")
    if xc is None:
        xc = 1 - x
    if x < 0 or xc <= 0:
        raise DomainError("hyp2f1 is implemented for 0 <= x < 1")
    if x <= 0.5 or _is_nonpos_int(a) or _is_nonpos_int(b):
        return _series_fast((a, b), (c,), x, ctx)
    # connection coefficients cancel more as the parameters grow
    boost = int(2 * (abs(a) + abs(b) + abs(c)))
    if boost > 6:
        hi = ctx.raised(boost)
        return ctx.mp.mpf(_connection(a, b, c, hi.mpf(x), hi.mpf(xc), hi))
    return _connection(a, b, c, x, xc, ctx)


def _connection(a, b, c, x, xc, ctx: PrecisionContext) -> RealValue:
    mp = ctx.mp
    w = xc
    m = c - a - b
    if m.denominator != 1:
        first, second = _connection_coeffs(a, b, c, ctx.working_digits)
        out = mp.zero
        if first != 0:
            out += first * _series_fast((a, b), (a + b - c + 1,), w, ctx)
        if second != 0:
            out += second * mp.power(w, ctx.mpf(m)) * _series_fast(
                (c - a, c - b), (m + 1,), w, ctx
            )
        return out
    if m < 0:
        # Euler transformation to positive integer excess
        return mp.power(w, int(m)) * _connection(c - a, c - b, c, x, xc, ctx)
    return _log_case(a, b, int(m), w, ctx)


def pfq_value(p: HypParams, x, xc, ctx: PrecisionContext) -> RealValue:
    """(p+1)F(p) at 0 <= x < 1, choosing the cheapest accurate method."""
    mp = ctx.mp
    p = p.reduced()
    if len(p.upper) != len(p.lower) + 1:
        raise DomainError(f"{p} is not of (p+1)F(p) shape")
    if p.terminates() or x == 0:
        return _series_fast(p.upper, p.lower, ctx.mpf(x), ctx)
    if not p.lower:
        (a,) = p.upper
        return mp.power(xc, -ctx.mpf(a))
    if len(p.lower) == 1:
        return hyp2f1(p.upper[0], p.upper[1], p.lower[0], x, ctx, xc)
    if x <= 0.5:
        return _series_fast(p.upper, p.lower, x, ctx)
    return euler_integral_eval(p, x, ctx, zc=xc).value


# ---------------------------------------------------------------------------
# Euler integral representation
# ---------------------------------------------------------------------------

def euler_pair(p: HypParams) -> tuple[int, int]:
    """Indices (i, j) maximizing lower[j] − upper[i] subject to lower > upper > 0."""
    best = None
    for i, a in enumerate(p.upper):
        for j, b in enumerate(p.lower):
            if b > a > 0 and (best is None or b - a > best[0]):
                best = (b - a, i, j)
    if best is None:
        raise DomainError(f"no admissible (a, b) pair with b > a > 0 in {p}")
    return best[1], best[2]


def euler_integral_eval(p: HypParams, z, ctx: PrecisionContext, zc=None) -> HypEvalReport:
    """Γ[b / a, b−a] ∫₀¹ t^(a−1) (1−t)^(b−a−1) pFp−1(...; z t) dt."""
    mp = ctx.mp
    zv = ctx.mpf(z) if not isinstance(z, RealValue) else z
    if zc is None:
        zc = 1 - zv
    if not (0 < zv <= 1):
        raise DomainError("euler_integral_eval needs 0 < z <= 1")
    if zc == 0 and p.reduced().excess <= 0:
        raise DivergenceError(f"{p} diverges at z = 1 (excess {p.reduced().excess})")
    i, j = euler_pair(p)
    a, b = p.upper[i], p.lower[j]
    inner = HypParams(
        tuple(x for k, x in enumerate(p.upper) if k != i),
        tuple(x for k, x in enumerate(p.lower) if k != j),
    )
    ea = ctx.mpf(a - 1)
    eb = ctx.mpf(b - a - 1)

    def integrand(t, tc):
        arg_c = zc + zv * tc  # 1 − z t without cancellation
        return mp.power(t, ea) * mp.power(tc, eb) * pfq_value(inner, zv * t, arg_c, ctx)

    quad = tanh_sinh(integrand, 0, 1, ctx)
    pre = gamma_bracket_eval(GammaBracket.of([b], [a, b - a]), ctx)
    return HypEvalReport(
        pre * quad.value, Method.EULER_INTEGRAL, quad.nodes, abs(pre) * quad.error
    )


# ---------------------------------------------------------------------------
# series at z = 1
# ---------------------------------------------------------------------------

def _terms_at_one(p: HypParams):
    def make(mp):
        t = mp.one
        n = 0
        while True:
            yield t
            num, den = _ratio_parts(p.upper, p.lower, n)
            t = t * num / den
            n += 1
    return make


def accelerated_at_one(p: HypParams, ctx: PrecisionContext, digits: int = 20) -> HypEvalReport:
    """Levin-accelerated direct series at z = 1 (cross-check only)."""
    p = p.reduced()
    if p.excess <= 0:
        raise DivergenceError(f"{p} diverges at z = 1")
    res = accelerate(_terms_at_one(p), ctx, digits)
    return HypEvalReport(res.value, Method.ACCELERATED_SERIES, res.terms, res.error)


def partial_sum_at_one(p: HypParams, n_terms: int, ctx: PrecisionContext):
    """Sum of the first ``n_terms`` terms at z = 1 and a tail estimate.

    The estimate 2 (N+1) t_N / s comes from comparing the Θ(n^(−1−s))
    terms with an integral; it is checked empirically, not proved.
    """
    mp = ctx.mp
    s = p.excess
    if s <= 0:
        raise DivergenceError(f"{p} diverges at z = 1")
    gen = _terms_at_one(p)(mp)
    total = mp.zero
    last = mp.zero
    for _ in range(n_terms):
        last = next(gen)
        total += last
    return total, 2 * abs(last) * (n_terms + 1) / ctx.mpf(s)


# ---------------------------------------------------------------------------
# summation theorems
# ---------------------------------------------------------------------------

def gauss_sum(a, b, c) -> GammaBracket:
    """2F1(a, b; c; 1) = Γ[c, c−a−b / c−a, c−b]."""
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    if _is_nonpos_int(c):
        raise DomainError(f"c = {c} is a nonpositive integer")
    if c - a - b <= 0:
        raise DivergenceError(f"Gauss sum needs c − a − b > 0, got {c - a - b}")
    return GammaBracket.of([c, c - a - b], [c - a, c - b])


def watson_sum(a, b, c, lower=None) -> GammaBracket:
    """3F2(a, b, c; (1+a+b)/2, 2c; 1) as a Gamma bracket.

    When ``lower`` is given it must equal ((1+a+b)/2, 2c) exactly, in
    either order.
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    e, f = (1 + a + b) / 2, 2 * c
    if lower is not None:
        lower = sorted(as_fraction(x) for x in lower)
        if lower != sorted([e, f]):
            raise PatternError(
                f"lower parameters {lower} are not ((1+a+b)/2, 2c) = ({e}, {f})"
            )
    if e + f - a - b - c <= 0:
        raise DivergenceError("Watson sum needs positive parameter excess")
    return GammaBracket.of(
        [HALF, (1 + 2 * c) / 2, (1 + a + b) / 2, (1 - a - b + 2 * c) / 2],
        [(1 + a) / 2, (1 + b) / 2, (1 - a + 2 * c) / 2, (1 - b + 2 * c) / 2],
    )


def match_watson(p: HypParams) -> tuple[Fraction, Fraction, Fraction] | None:
    """Some (a, b, c) with p = 3F2[a, b, c; (1+a+b)/2, 2c], or None."""
    if len(p.upper) != 3 or len(p.lower) != 2:
        return None
    target = sorted(p.lower)
    for perm in itertools.permutations(p.upper):
        a, b, c = perm
        if sorted([(1 + a + b) / 2, 2 * c]) == target:
            return a, b, c
    return None


def closed_form(p: HypParams) -> tuple[GammaBracket, str] | None:
    """Gauss or Watson bracket for p at z = 1 when one applies."""
    r = p.reduced()
    if len(r.upper) == 2 and len(r.lower) == 1:
        a, b = r.upper
        (c,) = r.lower
        if c - a - b > 0:
            try:
                return gauss_sum(a, b, c), "gauss"
            except DomainError:
                return None
    match = match_watson(r)
    if match is not None:
        try:
            return watson_sum(*match), "watson"
        except DomainError:
            return None
    return None


def pfq_at_one(p: HypParams, ctx: PrecisionContext, method: str = "auto") -> HypEvalReport:
    """(p+1)F(p) at z = 1.

    ``auto`` and ``integral`` use the Euler integral, ``series`` the Levin
    accelerated direct sum (about 20 digits), ``closed`` a Gauss/Watson
    bracket when the parameters fit one.
    """
    mp = ctx.mp
    r = p.reduced()
    if len(r.upper) != len(r.lower) + 1:
        raise DomainError(f"{p} is not of (p+1)F(p) shape")
    if any(a == 0 for a in r.upper):
        return HypEvalReport(mp.one, Method.CLOSED_FORM, 1, mp.zero)
    if r.excess <= 0 and not r.terminates():
        raise DivergenceError(f"{p} diverges at z = 1 (excess {r.excess})")
    if method in ("auto", "integral"):
        if r.terminates():
            return _terminating(r, ctx)
        return euler_integral_eval(r, 1, ctx, zc=mp.zero)
    if method == "series":
        return accelerated_at_one(r, ctx, digits=min(20, ctx.target_digits))
    if method == "closed":
        found = closed_form(r)
        if found is None:
            raise PatternError(f"no Gauss or Watson closed form for {p}")
        bracket, _ = found
        return HypEvalReport(gamma_bracket_eval(bracket, ctx), Method.CLOSED_FORM, 0, mp.zero)
    raise ValueError(f"unknown method {method!r}")


def _terminating(p: HypParams, ctx: PrecisionContext) -> HypEvalReport:
    mp = ctx.mp
    total = mp.zero
    t = mp.one
    n = 0
    while t != 0:
        total += t
        num, den = _ratio_parts(p.upper, p.lower, n)
        t = t * num / den
        n += 1
    return HypEvalReport(total, Method.DIRECT_SERIES, n, mp.zero)


# ---------------------------------------------------------------------------
# identity residuals
# ---------------------------------------------------------------------------

def _value_at(p: HypParams, z: RealValue, ctx: PrecisionContext) -> RealValue:
    if z == 1:
        return pfq_at_one(p, ctx).value
    if z <= 0.5:
        return pfq_series(p, z, ctx).value
    return euler_integral_eval(p, z, ctx).value


def contiguous_check(a, b, c, e, f, z, ctx: PrecisionContext) -> RealValue:
    """|(b−a) F[a,b,c] + a F[a+1,b,c] − b F[a,b+1,c]| for 3F2(...; e, f; z)."""
    a, b, c, e, f = (as_fraction(x) for x in (a, b, c, e, f))
    zv = ctx.mpf(as_fraction(z)) if not isinstance(z, RealValue) else z
    F1 = _value_at(HypParams.of([a, b, c], [e, f]), zv, ctx)
    F2 = _value_at(HypParams.of([a + 1, b, c], [e, f]), zv, ctx)
    F3 = _value_at(HypParams.of([a, b + 1, c], [e, f]), zv, ctx)
    return abs((b - a) * F1 + a * F2 - b * F3)


def cubic_transform_check(a, x, ctx: PrecisionContext) -> RealValue:
    """|2F1[a/3,(a+1)/3;(a+1)/2; 1−y³] − (1+2x)^a 2F1[a/3,(a+1)/3;(a+5)/6; x³]|,
    with y = (1−x)/(1+2x)."""
    mp = ctx.mp
    a = as_fraction(a)
    xv = ctx.mpf(as_fraction(x)) if not isinstance(x, RealValue) else x
    if not 0 <= xv < 1:
        raise DomainError("cubic transformation check needs 0 <= x < 1")
    y3 = ((1 - xv) / (1 + 2 * xv)) ** 3
    lhs = hyp2f1(a / 3, (a + 1) / 3, (a + 1) / 2, 1 - y3, ctx, y3)
    rhs = mp.power(1 + 2 * xv, ctx.mpf(a)) * hyp2f1(a / 3, (a + 1) / 3, (a + 5) / 6, xv**3, ctx)
    return abs(lhs - rhs)
