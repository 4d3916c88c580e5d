import json
from fractions import Fraction as F

import pytest

from theta_lvalues import HypParams, catalog, default_context, eval_expr, form_qexp, get_entry
from theta_lvalues.catalog import catalog_json, entry_ids

ROMAN = "i ii iii iv v vi vii viii ix x xi xii xiii xiv xv".split()


def test_twenty_entries_in_order():
    ids = entry_ids()
    assert ids == [f"T1.{r}" for r in ROMAN] + [f"T2.{r}" for r in ROMAN[:5]]


def test_weight_three():
    for e in catalog():
        assert e.form.weight == 3, e.id


def test_pullback_flags():
    flags = {e.id: e.pullback_supported for e in catalog()}
    assert [k for k, v in flags.items() if not v] == ["T2.iv", "T2.v"]


def test_transcription_examples():
    xiii = get_entry("T1.xiii")
    assert xiii.rhs.prefactor == "pi/16" and xiii.rhs.hyp is None
    iv = get_entry("T1.iv")
    assert iv.rhs.prefactor == "gamma(1/4)**2/(16*sqrt(pi))"
    assert iv.rhs.hyp == HypParams.of([F(1, 4), F(1, 2), F(1, 2)], [F(3, 2), 1])
    v = get_entry("T2.v")
    assert v.rhs.prefactor == "2*pi/3**(13/6)"
    assert v.rhs.hyp == HypParams.of([F(2, 9), F(5, 9), F(8, 9)], [1, 1])


def test_leading_coefficient_is_one():
    # every entry is scaled so its first nonzero coefficient is exactly 1
    for e in catalog():
        exponent, coeff = form_qexp(e.form, 8).leading()
        assert coeff == 1, e.id
        assert exponent.denominator == 1, e.id


def test_integer_exponents_only():
    for e in catalog():
        assert form_qexp(e.form, 64).denom == 1, e.id


def test_eval_expr():
    ctx = default_context(30)
    mp = ctx.mp
    assert abs(eval_expr("pi/16", ctx) - mp.pi / 16) < ctx.tol
    assert eval_expr("1/4", ctx) == ctx.mpf(F(1, 4))
    assert abs(eval_expr("2*pi/3**(11/6)", ctx) - 2 * mp.pi / mp.power(3, mp.mpf(11) / 6)) < ctx.tol
    nested = eval_expr("sqrt(sqrt(2)-1)", ctx)
    assert abs(nested**2 - (mp.sqrt(2) - 1)) < ctx.tol
    for bad in ("__import__('os')", "gamma(pi)", "x+1", "1.5"):
        with pytest.raises(ValueError):
            eval_expr(bad, ctx)


def test_json_serialization():
    text = catalog_json()
    data = json.loads(text)
    assert len(data) == 20
    assert data[12]["id"] == "T1.xiii"
    assert data[12]["factors"] == [
        {"kind": "theta2", "arg_scale": 1, "exponent": 4},
        {"kind": "theta4", "arg_scale": 1, "exponent": 2},
    ]
    assert data[12]["prefactor"] == "1/16"
    assert catalog_json() == text


def test_unknown_entry():
    with pytest.raises(KeyError):
        get_entry("T3.i")
