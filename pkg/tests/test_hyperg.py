import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from theta_lvalues import (
    BORWEIN_A,
    BORWEIN_C,
    DivergenceError,
    DomainError,
    GammaBracket,
    HypParams,
    Method,
    PatternError,
    catalog,
    contiguous_check,
    cubic_transform_check,
    euler_integral_eval,
    gamma_bracket_eval,
    gauss_sum,
    pfq_at_one,
    pfq_series,
    theta_numeric,
    watson_sum,
)
from theta_lvalues.hyperg import (
    accelerated_at_one,
    closed_form,
    euler_pair,
    hyp2f1,
    match_watson,
    partial_sum_at_one,
)
from theta_lvalues.identities import (
    CUBIC_A,
    CUBIC_X,
    contiguous_sets,
    gauss_triples,
    watson_triples,
)
from theta_lvalues.theta import theta_qexp


def H(upper, lower):
    return HypParams.of([F(x) for x in upper], [F(x) for x in lower])


def rel(x, y):
    return abs(x - y) / abs(y)


def test_params_basics():
    p = H(["1/4", "1/2", "1/2"], ["1", "1"])
    assert p.excess == F(3, 4)
    assert str(p) == "3F2[1/4,1/2,1/2; 1,1]"
    assert H(["1", "1/2", "1/2"], ["3/2", "1"]).reduced() == H(["1/2", "1/2"], ["3/2"])
    with pytest.raises(DomainError):
        H(["1/2"], ["-2", "1"])


def test_series_at_zero(ctx):
    r = pfq_series(H(["1/2", "1/2"], ["1"]), 0, ctx)
    assert r.value == 1 and r.method is Method.DIRECT_SERIES


def test_binomial_series(ctx):
    mp = ctx.mp
    r = pfq_series(H(["1/2"], []), F(3, 10), ctx)
    assert rel(r.value, mp.power(ctx.mpf("0.7"), -0.5)) < ctx.tol
    assert r.tail_bound < ctx.tol * abs(r.value)


def test_borwein_parametrization_against_lattice_sums(ctx):
    q = ctx.mpf("0.1")

    def partial(kind):
        return sum(ctx.mpf(c) * q ** ctx.mpf(e) for e, c in theta_qexp(kind, 1, 200).terms())

    a, c = partial(BORWEIN_A), partial(BORWEIN_C)
    value = pfq_series(H(["1/3", "2/3"], ["1"]), (c / a) ** 3, ctx).value
    assert rel(value, a) < ctx.tol
    assert rel(theta_numeric(BORWEIN_A, q, ctx), a) < ctx.tol


def test_at_one_examples(ctx):
    mp = ctx.mp
    assert rel(pfq_at_one(H(["1", "1/2", "1/2"], ["3/2", "1"]), ctx).value, mp.pi / 2) < ctx.tol
    watson = mp.gamma(mp.mpf(1) / 4) ** 4 / (4 * mp.pi**3)
    assert rel(pfq_at_one(H(["1/2"] * 3, ["1", "1"]), ctx).value, watson) < ctx.tol
    # reduces to 2F1[1/3, 1/3; 1; 1] and Gauss
    gauss = gamma_bracket_eval(GammaBracket.of(["1/3"], ["2/3", "2/3"]), ctx)
    assert rel(pfq_at_one(H(["1/3", "1/3", "2/3"], ["2/3", "1"]), ctx).value, gauss) < ctx.tol


def test_divergence(ctx):
    with pytest.raises(DivergenceError):
        pfq_at_one(H(["1/2", "1/2", "1/2"], ["1/2", "1"]), ctx)
    with pytest.raises(DivergenceError):
        gauss_sum(1, 1, 2)


def test_terminating_and_trivial(ctx):
    assert pfq_at_one(H(["0", "1/2", "1/3"], ["2", "5"]), ctx).value == 1
    # 2F1[-2, 1/2; 1; 1] = 1 - 1 + 3/8
    assert pfq_at_one(H(["-2", "1/2"], ["1"]), ctx).value == ctx.mpf(F(3, 8))


def test_euler_integral_examples(ctx):
    mp = ctx.mp
    r = euler_integral_eval(H(["1/2", "1/2"], ["3/2"]), 1, ctx)
    assert rel(r.value, mp.pi / 2) < ctx.tol
    assert r.method is Method.EULER_INTEGRAL
    p = H(["1/4", "1/2", "1/2"], ["3/4", "1"])
    acc = accelerated_at_one(p, ctx)
    assert rel(euler_integral_eval(p, 1, ctx).value, acc.value) < mp.mpf(10) ** -10


def test_euler_pair_choice():
    p = H(["1/4", "1/2", "1/2"], ["3/8", "1"])
    i, j = euler_pair(p)
    # b − a is largest for (1/4, 1): 3/4 beats (1/2, 1) and (1/4, 3/8)
    assert (p.upper[i], p.lower[j]) == (F(1, 4), F(1))
    with pytest.raises(DomainError):
        euler_pair(H(["2", "3"], ["1"]))


def test_euler_integral_below_one(ctx):
    mp = ctx.mp
    p = H(["1/3", "1/2", "3/4"], ["5/4", "2"])
    z = ctx.mpf("0.6")
    ref = mpmath.hyp3f2(*[mpmath.mpf(x.numerator) / x.denominator for x in p.upper + p.lower], mpmath.mpf("0.6"))
    assert rel(euler_integral_eval(p, z, ctx).value, ctx.mpf(ref)) < mp.mpf(10) ** -14


def test_gauss_examples(ctx):
    mp = ctx.mp
    gb = gauss_sum(F(1, 2), F(1, 2), F(3, 2))
    assert gb == GammaBracket.of(["3/2", "1/2"], [1, 1])
    assert rel(gamma_bracket_eval(gb, ctx), mp.pi / 2) < ctx.tol
    assert gamma_bracket_eval(gauss_sum(F(1, 3), 0, F(7, 5)), ctx) == 1


def test_watson_examples(ctx):
    mp = ctx.mp
    gb = watson_sum(F(1, 4), F(1, 2), F(1, 2), lower=[F(7, 8), 1])
    pre = GammaBracket.of(["1/4", "5/8"], ["7/8"])
    chain = ctx.mpf(F(1, 8)) * gamma_bracket_eval(pre * gb, ctx)
    expected = gamma_bracket_eval(GammaBracket.of(["1/4", "5/8", "1/2"], ["7/8", "3/4", "3/4"]), ctx) / 8
    assert rel(chain, expected) < ctx.tol
    half = watson_sum(F(1, 2), F(1, 2), F(1, 2))
    assert rel(gamma_bracket_eval(half, ctx), mp.gamma(mp.mpf(1) / 4) ** 4 / (4 * mp.pi**3)) < ctx.tol
    assert rel(accelerated_at_one(H(["1/2"] * 3, [1, 1]), ctx).value, gamma_bracket_eval(half, ctx)) < mp.mpf(10) ** -20
    assert rel(gamma_bracket_eval(watson_sum(0, F(1, 3), F(2, 5)), ctx), ctx.mpf(1)) < ctx.tol


def test_watson_pattern_is_exact():
    with pytest.raises(PatternError):
        watson_sum(F(1, 4), F(1, 2), F(1, 2), lower=[F(3, 4), 1])
    assert match_watson(H(["3/4", "1/2", "1/2"], ["9/8", "1"])) is not None
    assert match_watson(H(["1/4", "1/2", "1/2"], ["3/4", "1"])) is None


def test_closed_form_routes(ctx):
    assert closed_form(H(["1", "1/2", "1/2"], ["3/2", "1"]))[1] == "gauss"
    assert closed_form(H(["1/4", "1/2", "1/2"], ["7/8", "1"]))[1] == "watson"
    with pytest.raises(PatternError):
        pfq_at_one(H(["1/4", "1/2", "1/2"], ["3/8", "1"]), ctx, method="closed")


def test_gauss_random(ctx):
    rng = random.Random(11)
    for a, b, c in gauss_triples(rng, 30):
        closed = gamma_bracket_eval(gauss_sum(a, b, c), ctx)
        assert rel(pfq_at_one(H([a, b], [c]), ctx).value, closed) < ctx.tol


def test_watson_random(ctx):
    rng = random.Random(12)
    for a, b, c in watson_triples(rng, 20):
        closed = gamma_bracket_eval(watson_sum(a, b, c), ctx)
        value = pfq_at_one(H([a, b, c], [(1 + a + b) / 2, 2 * c]), ctx).value
        assert rel(value, closed) < ctx.mpf(10) ** -20


def _catalog_params():
    seen = []
    for e in catalog():
        if e.rhs.hyp is not None and e.rhs.hyp not in seen:
            seen.append(e.rhs.hyp)
    return seen


@pytest.mark.parametrize("p", _catalog_params(), ids=str)
def test_integral_vs_accelerated_series(ctx, p):
    integral = pfq_at_one(p, ctx)
    series = pfq_at_one(p, ctx, method="series")
    assert series.method is Method.ACCELERATED_SERIES
    assert rel(integral.value, series.value) < ctx.mpf(10) ** -10


def test_contiguous_examples(ctx):
    assert contiguous_check(F(1, 4), F(1, 2), F(1, 2), F(3, 2), 1, 1, ctx) < ctx.tol
    assert contiguous_check(F(1, 3), F(1, 3), F(1, 2), F(3, 2), 2, F(1, 2), ctx) < ctx.tol


def test_contiguous_random(ctx):
    rng = random.Random(13)
    for s in contiguous_sets(rng, 20):
        assert contiguous_check(*s, ctx) < ctx.mpf(10) ** -(ctx.target_digits - 5)


def test_contiguous_divergent_member(ctx):
    # the a+1 member has excess 0
    with pytest.raises(DomainError):
        contiguous_check(F(1, 2), F(1, 2), F(1, 2), F(3, 2), 1, 1, ctx)


def test_cubic_examples(ctx):
    assert cubic_transform_check(1, 0, ctx) < ctx.tol
    assert cubic_transform_check(1, F(1, 2), ctx) < ctx.mpf(10) ** -25
    assert cubic_transform_check(1, F(3, 10), ctx) < ctx.mpf(10) ** -25


def test_cubic_grid(ctx):
    for a in CUBIC_A:
        for x in CUBIC_X:
            assert cubic_transform_check(a, x, ctx) < ctx.mpf(10) ** -(ctx.target_digits - 5)


def test_series_tail_bound_holds(ctx):
    mp = ctx.mp
    for p, z in [(H(["1/2", "1/3"], ["1"]), "0.45"), (H(["5/2", "7/3", "1"], ["1/2", "2"]), "0.3")]:
        r = pfq_series(p, ctx.mpf(z), ctx)
        longer = ctx.raised(30)
        ref = pfq_series(p, longer.mpf(z), longer).value
        assert abs(ctx.mpf(ref) - r.value) <= r.tail_bound + 10 * ctx.eps * abs(r.value)


@pytest.mark.parametrize("p", [H(["1/2", "1/2", "1/2"], ["1", "3/2"]), H(["1/4", "1/2"], ["2"])], ids=str)
def test_partial_sum_tail_estimate(ctx, p):
    exact = pfq_at_one(p, ctx).value
    for n in (50, 200):
        s, bound = partial_sum_at_one(p, n, ctx)
        s10, _ = partial_sum_at_one(p, 10 * n, ctx)
        assert abs(s10 - s) <= bound
        assert abs(exact - s) <= bound


unit = st.fractions(min_value=F(1, 12), max_value=3, max_denominator=12)


@settings(max_examples=40, deadline=None)
@given(unit, unit, unit, st.fractions(min_value=0, max_value=F(19, 20), max_denominator=40))
def test_hyp2f1_against_mpmath(a, b, c, x):
    from theta_lvalues import default_context

    ctx = default_context(30)
    with mpmath.workdps(60):
        expected = mpmath.hyp2f1(*(mpmath.mpf(v.numerator) / v.denominator for v in (a, b, c, x)))
        got = hyp2f1(a, b, c, ctx.mpf(x), ctx)
        assert abs(got - expected) <= abs(expected) * mpmath.mpf(10) ** -28
