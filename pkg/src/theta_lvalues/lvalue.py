"""L(f, 1) for the catalog forms, three ways.

* Mellin: L(f,1) = ∫₀^∞ f(e^{-t}) dt.  The piece t > t0 is summed from the
  exact q-expansion, Σ aₙ e^{-n t0} / n, with a geometric tail bound; the
  piece (0, t0] is tanh-sinh quadrature of the numeric theta product.
* Pullback: substitute α = θ₂⁴/θ₃⁴ (or α = c³/a³), which turns the integral
  into a Beta-weighted ₂F₁ integral, i.e. a Gamma bracket times ₃F₂(1).
* Table: the tabulated closed forms from :mod:`catalog`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .acceleration import accelerate
from .catalog import REMARK_FORM, REMARK_VALUE, CatalogEntry, eval_expr, get_entry
from .errors import DomainError, TruncationError, UnsupportedEntryError
from .hyperg import HypParams, closed_form, contiguous_check, hyp2f1, pfq_at_one
from .qseries import QExpansion
from .quadrature import tanh_sinh
from .special import (
    GammaBracket,
    PrecisionContext,
    RealValue,
    agreed_digits,
    gamma_bracket_eval,
)
from .theta import (
    BORWEIN_A,
    BORWEIN_B,
    BORWEIN_C,
    JACOBI2,
    JACOBI3,
    JACOBI4,
    ThetaProductForm,
    form_at_t,
    form_qexp,
    theta_at_t,
)

BOUND_ORDER = 2000  # coefficients inspected for the growth constant K


# ---------------------------------------------------------------------------
# Mellin route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MellinResult:
    value: RealValue
    head: RealValue
    tail: RealValue
    tail_bound: RealValue
    order: int
    nodes: int


@lru_cache(maxsize=64)
def _expansion(f: ThetaProductForm, order: int) -> QExpansion:
    return form_qexp(f, order)


@lru_cache(maxsize=64)
def growth_constant(f: ThetaProductForm, order: int = BOUND_ORDER) -> Fraction:
    """K with |a_e| <= K e² for every exponent e below ``order``, doubled for margin."""
    worst = Fraction(0)
    for e, c in _expansion(f, order).terms():
        worst = max(worst, abs(c) / (e * e))
    return 2 * worst


def _tail_bound(K: Fraction, d: int, J: int, t0, mp) -> RealValue:
    """K Σ_{j>=J} (j/d) y^j with y = e^{-t0/d}: bounds Σ_{e>=J/d} |a_e| e^{-e t0} / e."""
    y = mp.exp(-t0 / d)
    return mp.mpf(K.numerator) / K.denominator / d * y**J * (J - (J - 1) * y) / (1 - y) ** 2


def l1_mellin(
    f: ThetaProductForm,
    ctx: PrecisionContext,
    t0=1,
    *,
    max_order: int = BOUND_ORDER,
) -> MellinResult:
    """L(f, 1) as ∫₀^∞ f(e^{-t}) dt, split at t0."""
    mp = ctx.mp
    t0 = ctx.mpf(t0)
    if t0 <= 0:
        raise DomainError("split point must be positive")
    # the form must vanish at q -> 1 for the integral to exist
    probe = abs(form_at_t(f, mp.mpf(1) / 1000, ctx))
    if probe > ctx.tol:
        raise DomainError(f"{f} does not decay as q -> 1 (|f| = {mp.nstr(probe, 5)} at t = 1/1000)")

    K = growth_constant(f)
    d = _expansion(f, 8).denom
    goal = ctx.eps
    J = d
    while _tail_bound(K, d, J, t0, mp) > goal:
        J *= 2
    lo, hi = J // 2, J
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _tail_bound(K, d, mid, t0, mp) > goal:
            lo = mid
        else:
            hi = mid
    order = math.ceil(Fraction(hi, d))
    if order > max_order:
        raise TruncationError(
            f"tail needs q-expansion order {order} beyond the bounded range {max_order}; "
            "raise max_order or the split point"
        )
    bound = _tail_bound(K, d, hi, t0, mp)

    tail = mp.zero
    for e, c in _expansion(f, BOUND_ORDER).truncate(order).terms():
        ev = ctx.mpf(e)
        tail += ctx.mpf(c) * mp.exp(-ev * t0) / ev

    quad = tanh_sinh(lambda t, tc: form_at_t(f, t, ctx), 0, t0, ctx)
    return MellinResult(quad.value + tail, quad.value, tail, bound, order, quad.nodes)


# ---------------------------------------------------------------------------
# α pullback
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PullbackResult:
    scale: Fraction
    constant: GammaBracket
    hyp: HypParams | None
    r: Fraction
    s: Fraction

    def __str__(self):
        tail = f" {self.hyp}" if self.hyp is not None else ""
        return f"({self.scale})·{self.constant}{tail}"

    def value(self, ctx: PrecisionContext, method: str = "auto") -> RealValue:
        out = ctx.mpf(self.scale) * gamma_bracket_eval(self.constant, ctx)
        if self.hyp is not None:
            out *= pfq_at_one(self.hyp, ctx, method=method).value
        return out


def _jacobi_exponents(f: ThetaProductForm) -> tuple[int, Fraction, Fraction]:
    k = min(x.arg_scale for x in f.factors)
    r = s = Fraction(0)
    theta3 = Fraction(0)
    for x in f.factors:
        e = x.exponent
        if x.arg_scale == k:
            if x.kind is JACOBI2:
                r += Fraction(e, 4)
            elif x.kind is JACOBI4:
                s += Fraction(e, 4)
            theta3 += e
        elif x.arg_scale == 2 * k and x.kind is JACOBI4:
            # θ₄²(x²) = θ₃(x)θ₄(x), so θ₄(x²) = θ₃(x)(1−α)^{1/8}
            s += Fraction(e, 8)
            theta3 += e
        else:
            raise UnsupportedEntryError(f"no pullback rule for factor {x} at base scale {k}")
    if theta3 != 6:
        raise UnsupportedEntryError(f"{f} is not of weight 3")
    return k, r, s


def _borwein_exponents(f: ThetaProductForm) -> tuple[int, Fraction, Fraction]:
    scales = {x.arg_scale for x in f.factors}
    if len(scales) != 1:
        raise UnsupportedEntryError(f"{f} mixes arguments; the cubic pullback needs one")
    (k,) = scales
    r = s = Fraction(0)
    total = 0
    for x in f.factors:
        if x.kind is BORWEIN_C:
            r += Fraction(x.exponent, 3)
        elif x.kind is BORWEIN_B:
            s += Fraction(x.exponent, 3)
        total += x.exponent
    if total != 3:
        raise UnsupportedEntryError(f"{f} is not of weight 3")
    return k, r, s


def alpha_pullback(entry: CatalogEntry | ThetaProductForm) -> PullbackResult:
    """Reduce L(f, 1) to (C/k) Γ[r, s / r+s] ₃F₂[r, u, 1−u; r+s, 1 | 1].

    With x = q^k every factor becomes a power of α, 1−α and θ₃(x)
    (or a(x)); q dα/dq = α(1−α)·F² turns f dq/q into
    (C/k) α^{r−1}(1−α)^{s−1} F(α) dα with F = ₂F₁[u, 1−u; 1; α],
    and the Euler integral finishes it.
    """
    if isinstance(entry, CatalogEntry):
        if not entry.pullback_supported:
            raise UnsupportedEntryError(f"{entry.id} has no symbolic pullback")
        f = entry.form
    else:
        f = entry
    kinds = {x.kind for x in f.factors}
    if all(k.is_jacobi for k in kinds):
        k, r, s = _jacobi_exponents(f)
        u = Fraction(1, 2)
    elif not any(k.is_jacobi for k in kinds):
        k, r, s = _borwein_exponents(f)
        u = Fraction(1, 3)
    else:
        raise UnsupportedEntryError("mixed Jacobi and Borwein factors")
    if r <= 0 or s <= 0:
        raise UnsupportedEntryError(f"{f} does not vanish at both ends (r={r}, s={s})")
    return PullbackResult(
        scale=f.prefactor / k,
        constant=GammaBracket.of([r, s], [r + s]),
        hyp=HypParams.of([r, u, 1 - u], [r + s, 1]),
        r=r,
        s=s,
    )


# ---------------------------------------------------------------------------
# table values and verification
# ---------------------------------------------------------------------------

def rhs_eval(entry: CatalogEntry, ctx: PrecisionContext, method: str = "auto") -> RealValue:
    out = eval_expr(entry.rhs.prefactor, ctx)
    if entry.rhs.hyp is not None:
        out *= pfq_at_one(entry.rhs.hyp, ctx, method=method).value
    return out


def pass_threshold(entry: CatalogEntry | None, ctx: PrecisionContext) -> int:
    if entry is not None and not entry.pullback_supported:
        return ctx.target_digits - 10
    return ctx.target_digits - 5


@dataclass
class LValueReport:
    entry_id: str
    lhs: RealValue
    rhs: RealValue
    pullback: RealValue | None
    agreed_digits: int
    pullback_digits: int | None
    passed: bool
    elapsed_ms_lhs: float
    elapsed_ms_rhs: float
    extra: dict = field(default_factory=dict)

    def as_dict(self, digits: int | None = None) -> dict:
        def show(x):
            mp = x.context
            return mp.nstr(x, digits or mp.dps, strip_zeros=False)

        out = {"id": self.entry_id, "lhs": show(self.lhs), "rhs": show(self.rhs)}
        if self.pullback is not None:
            out["pullback"] = show(self.pullback)
            out["pullback_agreed_digits"] = self.pullback_digits
        out["agreed_digits"] = self.agreed_digits
        out["pass"] = self.passed
        out["elapsed_ms_lhs"] = round(self.elapsed_ms_lhs, 1)
        out["elapsed_ms_rhs"] = round(self.elapsed_ms_rhs, 1)
        for k, v in self.extra.items():
            out[k] = show(v) if isinstance(v, RealValue) else v
        return out

    @classmethod
    def from_dict(cls, d: dict, ctx: PrecisionContext) -> "LValueReport":
        known = {"id", "lhs", "rhs", "pullback", "pullback_agreed_digits", "agreed_digits",
                 "pass", "elapsed_ms_lhs", "elapsed_ms_rhs"}
        return cls(
            entry_id=d["id"],
            lhs=ctx.mpf(d["lhs"]),
            rhs=ctx.mpf(d["rhs"]),
            pullback=ctx.mpf(d["pullback"]) if "pullback" in d else None,
            agreed_digits=d["agreed_digits"],
            pullback_digits=d.get("pullback_agreed_digits"),
            passed=d["pass"],
            elapsed_ms_lhs=d["elapsed_ms_lhs"],
            elapsed_ms_rhs=d["elapsed_ms_rhs"],
            extra={k: v for k, v in d.items() if k not in known},
        )


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1000


def verify_entry(entry: CatalogEntry | str, ctx: PrecisionContext) -> LValueReport:
    """Mellin value against the table value, plus the pullback value when there is one."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    cap = ctx.working_digits
    lhs, t_lhs = _timed(lambda: l1_mellin(entry.form, ctx).value)
    rhs, t_rhs = _timed(lambda: rhs_eval(entry, ctx))
    need = pass_threshold(entry, ctx)
    digits = agreed_digits(lhs, rhs, cap)
    pullback = None
    pb_digits = None
    ok = digits >= need
    if entry.pullback_supported:
        pullback = alpha_pullback(entry).value(ctx)
        pb_digits = agreed_digits(pullback, lhs, cap)
        ok = ok and pb_digits >= need
    return LValueReport(entry.id, lhs, rhs, pullback, digits, pb_digits, ok, t_lhs, t_rhs)


def remark_routes(ctx: PrecisionContext) -> dict:
    """The three evaluations of the splitting remark, plus the contiguous residual.

    f = ½θ₂θ₃⁴θ₄ (all at q⁴) = f_iv + 16 f_xiv.  Route (c) adds the two
    ₃F₂ values with the contiguous relation at (a, b) = (1/4, 1/2), which
    leaves 2·₂F₁[1/4, 1/2; 1 | 1] and hence a Gauss bracket.
    """
    iv, xiv = get_entry("T1.iv"), get_entry("T1.xiv")
    table_sum = rhs_eval(iv, ctx) + 16 * rhs_eval(xiv, ctx)
    mellin = l1_mellin(REMARK_FORM, ctx).value
    a, b = Fraction(1, 4), Fraction(1, 2)
    collapsed = HypParams.of([a, b + 1, Fraction(1, 2)], [Fraction(3, 2), 1])
    bracket, _ = closed_form(collapsed)
    contiguous = eval_expr(iv.rhs.prefactor, ctx) * (b / a) * gamma_bracket_eval(bracket, ctx)
    residual = contiguous_check(a, b, Fraction(1, 2), Fraction(3, 2), 1, 1, ctx)
    return {
        "table_sum": table_sum,
        "mellin": mellin,
        "contiguous": contiguous,
        "closed": eval_expr(REMARK_VALUE, ctx),
        "contiguous_residual": residual,
    }


def remark_splitting_residual(order: int = 2000) -> QExpansion:
    """½θ₂θ₃⁴θ₄ − (f_iv + 16 f_xiv) as an exact series; zero when the identity holds."""
    iv, xiv = get_entry("T1.iv"), get_entry("T1.xiv")
    return form_qexp(REMARK_FORM, order) - (form_qexp(iv.form, order) + form_qexp(xiv.form, order) * 16)


def verify_remark(ctx: PrecisionContext, order: int = 2000) -> LValueReport:
    cap = ctx.working_digits
    identity_ok = remark_splitting_residual(order).is_zero()
    routes, elapsed = _timed(lambda: remark_routes(ctx))
    closed = routes["closed"]
    need = ctx.target_digits - 5
    d_mellin = agreed_digits(routes["mellin"], closed, cap)
    d_table = agreed_digits(routes["table_sum"], closed, cap)
    d_contig = agreed_digits(routes["contiguous"], closed, cap)
    ok = (
        identity_ok
        and min(d_mellin, d_table, d_contig) >= need
        and routes["contiguous_residual"] < ctx.mpf(10) ** (-(ctx.target_digits - 5))
    )
    return LValueReport(
        "remark",
        routes["mellin"],
        closed,
        None,
        d_mellin,
        None,
        ok,
        elapsed,
        0.0,
        extra={
            "table_sum": routes["table_sum"],
            "table_sum_agreed_digits": d_table,
            "contiguous": routes["contiguous"],
            "contiguous_agreed_digits": d_contig,
            "contiguous_residual": routes["contiguous_residual"],
            "splitting_identity_exact": identity_ok,
        },
    )


# ---------------------------------------------------------------------------
# independent oracle for T2.iv
# ---------------------------------------------------------------------------

def series_iv_terms(mp):
    """3^{-4/3} (1/3)ₙ(2/3)ₙ/n!² Γ[3n+1/3, 2/3 / 3n+1], n = 0, 1, …"""
    third = mp.mpf(1) / 3
    t = mp.power(3, -4 * third) * mp.gamma(third) * mp.gamma(2 * third)
    n = 0
    while True:
        yield t
        ratio = (n + third) * (n + 2 * third) / mp.mpf(n + 1) ** 2
        m = 3 * n
        ratio *= (m + third) * (m + 1 + third) * (m + 2 + third) / ((m + 1) * (m + 2) * mp.mpf(m + 3))
        t *= ratio
        n += 1


def series_iv_oracle(ctx: PrecisionContext, digits: int = 20):
    """The termwise-integrated series for T2.iv, Levin-accelerated."""
    return accelerate(series_iv_terms, ctx, digits)


# ---------------------------------------------------------------------------
# parametrization checks
# ---------------------------------------------------------------------------

def jacobi_alpha(t, ctx: PrecisionContext) -> tuple[RealValue, RealValue, RealValue]:
    """(α, 1−α, θ₃) at q = e^{-t}, with 1−α = θ₄⁴/θ₃⁴ computed directly."""
    t2 = theta_at_t(JACOBI2, t, ctx)
    t3 = theta_at_t(JACOBI3, t, ctx)
    t4 = theta_at_t(JACOBI4, t, ctx)
    return (t2 / t3) ** 4, (t4 / t3) ** 4, t3


def borwein_alpha(t, ctx: PrecisionContext) -> tuple[RealValue, RealValue, RealValue]:
    """(α, 1−α, a) at q = e^{-t} with α = c³/a³."""
    a = theta_at_t(BORWEIN_A, t, ctx)
    b = theta_at_t(BORWEIN_B, t, ctx)
    c = theta_at_t(BORWEIN_C, t, ctx)
    return (c / a) ** 3, (b / a) ** 3, a


_FAMILY = {
    "jacobi": (jacobi_alpha, Fraction(1, 2), 2),
    "borwein": (borwein_alpha, Fraction(1, 3), 1),
}


def parametrization_residual(family: str, q, ctx: PrecisionContext) -> RealValue:
    """|θ₃² − ₂F₁[½,½;1;α]| / θ₃² (Jacobi) or |a − ₂F₁[⅓,⅔;1;α]| / a (Borwein)."""
    alpha_of, u, power = _FAMILY[family]
    t = -ctx.mp.log(ctx.mpf(q))
    alpha, alpha_c, base = alpha_of(t, ctx)
    lhs = base**power
    rhs = hyp2f1(u, 1 - u, 1, alpha, ctx, alpha_c)
    return abs(lhs - rhs) / lhs


def jacobian_residual(family: str, q, ctx: PrecisionContext) -> RealValue:
    """Relative gap between q dα/dq (central difference) and α(1−α)F².

    Near q = 1 the difference is taken on 1−α, which is then the small one.
    """
    mp = ctx.mp
    alpha_of, u, _ = _FAMILY[family]
    qv = ctx.mpf(q)
    h = mp.mpf(10) ** (-(ctx.working_digits // 3))
    a, ac, _ = alpha_of(-mp.log(qv), ctx)
    pick = 0 if a <= ac else 1

    def alpha(x):
        return alpha_of(-mp.log(x), ctx)[pick]

    deriv = abs(qv * (alpha(qv + h) - alpha(qv - h)) / (2 * h))
    F = hyp2f1(u, 1 - u, 1, a, ctx, ac)
    expected = a * ac * F**2
    return abs(deriv - expected) / expected


def endpoint_values(f: ThetaProductForm, ctx: PrecisionContext) -> tuple[RealValue, RealValue]:
    """|f(e^{-t})| at t = 40 and t = 1/40."""
    mp = ctx.mp
    return abs(form_at_t(f, mp.mpf(40), ctx)), abs(form_at_t(f, mp.mpf(1) / 40, ctx))
