"""The twenty theta-product forms and their tabulated L(f, 1) values.

Right-hand sides are kept as small expression strings over rationals,
``pi``, ``sqrt`` and ``gamma`` so the transcription can be audited
character by character.  :func:`eval_expr` evaluates them with Gamma
arguments held as exact fractions.
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass
from fractions import Fraction

from .hyperg import HypParams
from .special import PrecisionContext, RealValue, gamma
from .theta import (
    BORWEIN_A,
    BORWEIN_B,
    BORWEIN_C,
    JACOBI2,
    JACOBI3,
    JACOBI4,
    ThetaKind,
    ThetaProductForm,
    form,
)


@dataclass(frozen=True)
class RhsExpression:
    prefactor: str
    hyp: HypParams | None = None

    def __str__(self):
        return self.prefactor if self.hyp is None else f"{self.prefactor} * {self.hyp}"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    form: ThetaProductForm
    rhs: RhsExpression
    pullback_supported: bool = True

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "prefactor": str(self.form.prefactor),
            "factors": [
                {"kind": f.kind.value, "arg_scale": f.arg_scale, "exponent": f.exponent}
                for f in self.form.factors
            ],
            "rhs": str(self.rhs),
            "pullback_supported": self.pullback_supported,
        }


# ---------------------------------------------------------------------------
# expression evaluation
# ---------------------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _ev(node, ctx: PrecisionContext):
    """Fractions while the arithmetic stays rational, mpf once it does not."""
    mp = ctx.mp
    if isinstance(node, ast.Expression):
        return _ev(node.body, ctx)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return mp.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_ev(node.operand, ctx)
    if isinstance(node, ast.BinOp):
        left = _ev(node.left, ctx)
        right = _ev(node.right, ctx)
        if isinstance(node.op, ast.Pow):
            if isinstance(left, Fraction) and isinstance(right, Fraction) and right.denominator == 1:
                return left ** int(right)
            return mp.power(_num(left, ctx), _num(right, ctx))
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {ast.dump(node.op)}")
        if isinstance(left, Fraction) and isinstance(right, Fraction):
            return op(left, right)
        return op(_num(left, ctx), _num(right, ctx))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
        arg = _ev(node.args[0], ctx)
        if node.func.id == "sqrt":
            return mp.sqrt(_num(arg, ctx))
        if node.func.id == "gamma":
            if not isinstance(arg, Fraction):
                raise ValueError("gamma arguments in a table constant must be rational")
            return gamma(arg, ctx)
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


def _num(x, ctx: PrecisionContext) -> RealValue:
    return ctx.mpf(x) if isinstance(x, Fraction) else x


def eval_expr(text: str, ctx: PrecisionContext) -> RealValue:
    """Evaluate a table constant such as ``"gamma(1/4)**2/(8*sqrt(pi))"``."""
    return _num(_ev(ast.parse(text, mode="eval"), ctx), ctx)


# ---------------------------------------------------------------------------
# the tables
# ---------------------------------------------------------------------------

def _h(upper: str, lower: str) -> HypParams:
    return HypParams.of(upper.split(","), lower.split(","))


_J2, _J3, _J4 = JACOBI2, JACOBI3, JACOBI4
_A, _B, _C = BORWEIN_A, BORWEIN_B, BORWEIN_C

_ENTRIES = (
    ("T1.i", form("1/2", (_J2, 4, 1), (_J3, 4, 4), (_J4, 8, 1)),
     "sqrt(sqrt(2)+1)*gamma(1/4)**2/(8*sqrt(pi))", _h("1/4,1/2,1/2", "3/8,1")),
    ("T1.ii", form("1/2", (_J2, 4, 1), (_J3, 4, 3), (_J4, 4, 2)),
     "gamma(1/4)**2/(8*sqrt(2*pi))", _h("1/4,1/2,1/2", "3/4,1")),
    ("T1.iii", form("1/2", (_J2, 4, 1), (_J3, 4, 2), (_J4, 4, 3)),
     "pi/(4*sqrt(2))", _h("1/4,1/2,1/2", "1,1")),
    ("T1.iv", form("1/2", (_J2, 4, 1), (_J4, 4, 5)),
     "gamma(1/4)**2/(16*sqrt(pi))", _h("1/4,1/2,1/2", "3/2,1")),
    ("T1.v", form("1/2", (_J2, 4, 1), (_J4, 8, 5)),
     "sqrt(sqrt(2)-1)*gamma(1/4)**4/(16*pi**2)", None),
    ("T1.vi", form("1/4", (_J2, 2, 2), (_J3, 2, 3), (_J4, 2, 1)),
     "gamma(1/4)**2/(8*sqrt(2*pi))", _h("1/2,1/2,1/2", "3/4,1")),
    ("T1.vii", form("1/4", (_J2, 2, 2), (_J3, 2, 1), (_J4, 2, 3)),
     "gamma(3/4)**2/(2*sqrt(2*pi))", _h("1/2,1/2,1/2", "5/4,1")),
    ("T1.viii", form("1/4", (_J2, 2, 2), (_J4, 2, 4)),
     "1/4", _h("1/2,1/2,1/2", "3/2,1")),
    ("T1.ix", form("1/8", (_J2, 4, 3), (_J3, 4, 2), (_J4, 4, 1)),
     "pi/(16*sqrt(2))", _h("3/4,1/2,1/2", "1,1")),
    ("T1.x", form("1/8", (_J2, 4, 3), (_J3, 4, 1), (_J4, 4, 2)),
     "gamma(3/4)**2/(8*sqrt(2*pi))", _h("3/4,1/2,1/2", "5/4,1")),
    ("T1.xi", form("1/8", (_J2, 4, 3), (_J4, 4, 3)),
     "pi/(32*sqrt(2))", None),
    ("T1.xii", form("1/8", (_J2, 4, 3), (_J4, 8, 3)),
     "gamma(1/8)*gamma(1/4)*gamma(3/8)**3/(128*pi**(5/2))", None),
    ("T1.xiii", form("1/16", (_J2, 1, 4), (_J4, 1, 2)),
     "pi/16", None),
    ("T1.xiv", form("1/32", (_J2, 4, 5), (_J4, 4, 1)),
     "gamma(1/4)**2/(256*sqrt(pi))", _h("5/4,1/2,1/2", "3/2,1")),
    ("T1.xv", form("1/32", (_J2, 4, 5), (_J4, 8, 1)),
     "sqrt(sqrt(2)+1)*gamma(1/4)**4/(128*pi**2)", None),
    ("T2.i", form("1/3", (_A, 3, 1), (_C, 3, 1), (_B, 3, 1)),
     "gamma(1/3)**6/(8*sqrt(3)*pi**3)", None),
    ("T2.ii", form("1/3", (_C, 3, 1), (_B, 3, 2)),
     "2*pi/(9*sqrt(3))", _h("1/3,1/3,2/3", "1,1")),
    ("T2.iii", form("1/9", (_C, 3, 2), (_B, 3, 1)),
     "2*pi/(27*sqrt(3))", _h("1/3,2/3,2/3", "1,1")),
    ("T2.iv", form("1/3", (_C, 3, 1), (_B, 9, 2)),
     "2*pi/3**(11/6)", _h("1/9,4/9,7/9", "1,1")),
    ("T2.v", form("1/9", (_C, 3, 2), (_B, 9, 1)),
     "2*pi/3**(13/6)", _h("2/9,5/9,8/9", "1,1")),
)

_UNSUPPORTED = {"T2.iv", "T2.v"}

_CATALOG = tuple(
    CatalogEntry(i, f, RhsExpression(expr, hyp), i not in _UNSUPPORTED)
    for i, f, expr, hyp in _ENTRIES
)
_BY_ID = {e.id: e for e in _CATALOG}

# the combined form of the splitting remark: f_iv + 16 f_xiv
REMARK_FORM = form("1/2", (_J2, 4, 1), (_J3, 4, 4), (_J4, 4, 1))
REMARK_VALUE = "gamma(1/4)**4/(8*sqrt(2)*pi**2)"


def catalog() -> list[CatalogEntry]:
    return list(_CATALOG)


def entry_ids() -> list[str]:
    return [e.id for e in _CATALOG]


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog entry {entry_id!r}") from None


def catalog_json(indent: int | None = 2) -> str:
    return json.dumps([e.as_dict() for e in _CATALOG], indent=indent, ensure_ascii=False)


__all__ = [
    "CatalogEntry",
    "RhsExpression",
    "ThetaKind",
    "catalog",
    "catalog_json",
    "entry_ids",
    "eval_expr",
    "get_entry",
    "REMARK_FORM",
    "REMARK_VALUE",
]
