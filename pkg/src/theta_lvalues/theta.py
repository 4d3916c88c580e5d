"""Jacobi and Borwein theta series, exactly and numerically.

Exact expansions come straight from the lattice sums.  Numeric values on
0 < q < 1 use the nome exponent (q = exp(-t)) internally so arguments
close to q = 1 keep full relative precision; near q = 1 the series are
evaluated after a modular transformation.  The Borwein functions go
through eta quotients:

    b(q) = η(q)³ / η(q³),   c(q) = 3 η(q³)³ / η(q),   a = (b³ + c³)^(1/3)
"""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, WrongFamilyError
from .qseries import QExpansion, qs_mul, qs_pow
from .special import PrecisionContext, RealValue, as_fraction


class ThetaKind(enum.Enum):
    JACOBI2 = "theta2"
    JACOBI3 = "theta3"
    JACOBI4 = "theta4"
    BORWEIN_A = "a"
    BORWEIN_B = "b"
    BORWEIN_C = "c"

    @property
    def is_jacobi(self) -> bool:
        return self in (ThetaKind.JACOBI2, ThetaKind.JACOBI3, ThetaKind.JACOBI4)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 2) if self.is_jacobi else Fraction(1)


JACOBI2, JACOBI3, JACOBI4 = ThetaKind.JACOBI2, ThetaKind.JACOBI3, ThetaKind.JACOBI4
BORWEIN_A, BORWEIN_B, BORWEIN_C = ThetaKind.BORWEIN_A, ThetaKind.BORWEIN_B, ThetaKind.BORWEIN_C


# ---------------------------------------------------------------------------
# exact expansions
# ---------------------------------------------------------------------------

def jacobi_theta_qexp(kind: ThetaKind, scale: int, order) -> QExpansion:
    """θ₂, θ₃ or θ₄ at q**scale, exact below ``order``."""
    if not kind.is_jacobi:
        raise WrongFamilyError(f"{kind.value} is not a Jacobi theta series")
    order = as_fraction(order)
    terms: dict[Fraction, int] = defaultdict(int)
    n_max = math.isqrt(int(order / scale) + 1) + 2
    for n in range(-n_max, n_max + 1):
        if kind is JACOBI2:
            e = scale * (Fraction(2 * n + 1, 2) ** 2)
            c = 1
        else:
            e = Fraction(scale * n * n)
            c = -1 if kind is JACOBI4 and n % 2 else 1
        if e < order:
            terms[e] += c
    return QExpansion.from_terms(terms, order)


def _lattice(bound: Fraction, shift: Fraction):
    """(n, m, Q) with Q = (n+s)² + (n+s)(m+s) + (m+s)² < bound."""
    r = math.isqrt(int(bound * 4 / 3) + 1) + 2
    for n in range(-r, r + 1):
        for m in range(-r, r + 1):
            x, y = n + shift, m + shift
            Q = x * x + x * y + y * y
            if Q < bound:
                yield n, m, Q


def borwein_theta_qexp(kind: ThetaKind, scale: int, order) -> QExpansion:
    """a, b or c at q**scale, exact below ``order``, by lattice enumeration."""
    if kind.is_jacobi:
        raise WrongFamilyError(f"{kind.value} is not a Borwein theta series")
    order = as_fraction(order)
    bound = order / scale
    if kind is BORWEIN_A:
        counts: dict[Fraction, int] = defaultdict(int)
        for _, _, Q in _lattice(bound, Fraction(0)):
            counts[scale * Fraction(Q)] += 1
        return QExpansion.from_terms(counts, order)
    if kind is BORWEIN_C:
        counts = defaultdict(int)
        for _, _, Q in _lattice(bound, Fraction(1, 3)):
            counts[scale * Q] += 1
        return QExpansion.from_terms(counts, order)
    # ω^(n−m) grouped by residue class: 1 for class 0, −1/2 ± i√3/2 otherwise
    classes: dict[Fraction, list[int]] = defaultdict(lambda: [0, 0, 0])
    for n, m, Q in _lattice(bound, Fraction(0)):
        classes[scale * Fraction(Q)][(n - m) % 3] += 1
    terms = {}
    for e, (n0, n1, n2) in classes.items():
        if n1 != n2:
            raise ArithmeticError(f"b(q) coefficient at q^{e} is not real")
        terms[e] = n0 - n1  # n0 − (n1 + n2)/2 with n1 == n2
    return QExpansion.from_terms(terms, order)


def theta_qexp(kind: ThetaKind, scale: int, order) -> QExpansion:
    if kind.is_jacobi:
        return jacobi_theta_qexp(kind, scale, order)
    return borwein_theta_qexp(kind, scale, order)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def _jacobi_direct(kind: ThetaKind, tau, ctx: PrecisionContext) -> RealValue:
    """Defining sum at q = exp(−π τ); fast for τ >= 1."""
    mp = ctx.mp
    q = mp.exp(-mp.pi * tau)
    eps = ctx.eps
    if kind is JACOBI2:
        # 2 q^(1/4) Σ_{n>=0} q^(n(n+1))
        total = mp.one
        n = 1
        while True:
            t = q ** (n * (n + 1))
            total += t
            if t < eps * total:
                break
            n += 1
        return 2 * mp.exp(-mp.pi * tau / 4) * total
    sign = -1 if kind is JACOBI4 else 1
    total = mp.one
    n = 1
    while True:
        t = q ** (n * n)
        total += 2 * t * (sign ** n)
        if t < eps:
            break
        n += 1
    return total


_TRANSFORMED = {JACOBI2: JACOBI4, JACOBI3: JACOBI3, JACOBI4: JACOBI2}


def jacobi_at_tau(kind: ThetaKind, tau, ctx: PrecisionContext) -> RealValue:
    """θ at q = exp(−π τ), τ > 0, via θ(e^(−πτ)) = τ^(−1/2) θ'(e^(−π/τ)) when τ < 1."""
    if tau >= 1:
        return _jacobi_direct(kind, tau, ctx)
    mp = ctx.mp
    return _jacobi_direct(_TRANSFORMED[kind], 1 / tau, ctx) / mp.sqrt(tau)


def _eta_direct(s, ctx: PrecisionContext) -> RealValue:
    """η at q = exp(−s): q^(1/24) Σ (−1)^n q^(n(3n−1)/2)."""
    mp = ctx.mp
    q = mp.exp(-s)
    eps = ctx.eps
    total = mp.one
    n = 1
    while True:
        t = q ** (n * (3 * n - 1) // 2)
        t2 = t * q ** n  # exponent n(3n+1)/2
        total += (t + t2) * (-1) ** n
        if t < eps:
            break
        n += 1
    return mp.exp(-s / 24) * total


def eta_at(s, ctx: PrecisionContext) -> RealValue:
    """Dedekind η at q = exp(−s), s > 0, via η(i y) = y^(−1/2) η(i / y)."""
    mp = ctx.mp
    y = s / (2 * mp.pi)
    if y >= 1:
        return _eta_direct(s, ctx)
    return _eta_direct(2 * mp.pi / y, ctx) / mp.sqrt(y)


def theta_at_t(kind: ThetaKind, t, ctx: PrecisionContext) -> RealValue:
    """Theta value at q = exp(−t), t > 0."""
    mp = ctx.mp
    if t <= 0:
        raise DomainError("theta_at_t needs t > 0")
    if kind.is_jacobi:
        return jacobi_at_tau(kind, t / mp.pi, ctx)
    e1 = eta_at(t, ctx)
    e3 = eta_at(3 * t, ctx)
    b = e1**3 / e3
    c = 3 * e3**3 / e1
    if kind is BORWEIN_B:
        return b
    if kind is BORWEIN_C:
        return c
    return mp.cbrt(b**3 + c**3)


def theta_numeric(kind: ThetaKind, q, ctx: PrecisionContext) -> RealValue:
    """Theta value at a real nome 0 < q < 1."""
    qv = ctx.mpf(q) if not isinstance(q, RealValue) else q
    if not 0 < qv < 1:
        raise DomainError(f"theta_numeric needs 0 < q < 1, got {q}")
    return theta_at_t(kind, -ctx.mp.log(qv), ctx)


# ---------------------------------------------------------------------------
# theta products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaFactor:
    kind: ThetaKind
    arg_scale: int
    exponent: int

    def __str__(self):
        name = {JACOBI2: "θ2", JACOBI3: "θ3", JACOBI4: "θ4"}.get(self.kind, self.kind.value)
        arg = "q" if self.arg_scale == 1 else f"q^{self.arg_scale}"
        power = "" if self.exponent == 1 else f"^{self.exponent}"
        return f"{name}{power}({arg})"


@dataclass(frozen=True)
class ThetaProductForm:
    prefactor: Fraction
    factors: tuple[ThetaFactor, ...]

    @property
    def weight(self) -> Fraction:
        return sum((f.kind.weight * f.exponent for f in self.factors), Fraction(0))

    def __str__(self):
        return f"({self.prefactor})·" + "·".join(map(str, self.factors))


def form(prefactor, *factors: tuple[ThetaKind, int, int]) -> ThetaProductForm:
    return ThetaProductForm(
        as_fraction(prefactor), tuple(ThetaFactor(k, s, e) for k, s, e in factors)
    )


@lru_cache(maxsize=256)
def _factor_qexp(kind: ThetaKind, scale: int, exponent: int, order: Fraction) -> QExpansion:
    return qs_pow(theta_qexp(kind, scale, order), exponent)


def form_qexp(f: ThetaProductForm, order) -> QExpansion:
    """Exact expansion of prefactor × ∏ factors below ``order``."""
    order = as_fraction(order)
    out = QExpansion.constant(f.prefactor, order)
    for fac in f.factors:
        out = qs_mul(out, _factor_qexp(fac.kind, fac.arg_scale, fac.exponent, order))
    return out


def form_at_t(f: ThetaProductForm, t, ctx: PrecisionContext) -> RealValue:
    """The form at q = exp(−t)."""
    out = ctx.mpf(f.prefactor)
    for fac in f.factors:
        out *= theta_at_t(fac.kind, fac.arg_scale * t, ctx) ** fac.exponent
    return out


def form_numeric(f: ThetaProductForm, q, ctx: PrecisionContext) -> RealValue:
    qv = ctx.mpf(q) if not isinstance(q, RealValue) else q
    if not 0 < qv < 1:
        raise DomainError(f"form_numeric needs 0 < q < 1, got {q}")
    return form_at_t(f, -ctx.mp.log(qv), ctx)
