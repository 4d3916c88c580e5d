"""Command line front end: ``theta-lvalues verify | identities | qexp | hyp | gamma``.

Exit status is 0 when everything requested passed, 1 when a verification
or identity check failed (or a value could not be computed), 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .catalog import entry_ids, get_entry
from .errors import DomainError, PatternError, PrecisionError, TruncationError
from .hyperg import HypParams, euler_integral_eval, pfq_at_one, pfq_series
from .identities import exact_suites, numeric_suites
from .lvalue import verify_entry, verify_remark
from .special import PrecisionContext, as_fraction, default_context, gamma
from .theta import ThetaKind, form, form_qexp

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    digits: int = 30
    seed: int = 42
    order: int = 2000
    format: str = "table"
    entries: tuple[str, ...] = ()
    method: str = "auto"

    def __post_init__(self):
        if self.digits < 10:
            raise UsageError("--digits must be at least 10")
        if self.order < 1:
            raise UsageError("--order must be positive")
        if not -(2**63) <= self.seed < 2**64:
            raise UsageError("--seed must fit in 64 bits")

    @property
    def ctx(self) -> PrecisionContext:
        return default_context(self.digits)


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}") from None


def _fraction_list(text: str) -> list[Fraction]:
    """Parameters must be written as integers or p/q; decimals are refused."""
    if text.strip() == "":
        return []
    items = [t.strip() for t in text.split(",")]
    for t in items:
        if any(ch in t for ch in ".eE"):
            raise UsageError(f"parameters must be exact rationals like 3/4, got {t!r}")
    return [_fraction(t) for t in items]


def _emit(cfg: CliConfig, payload, rows: list[str]) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print("\n".join(rows))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _selected_entries(cfg: CliConfig) -> list[str]:
    known = entry_ids() + ["remark"]
    if not cfg.entries:
        return known
    unknown = [e for e in cfg.entries if e not in known]
    if unknown:
        raise UsageError(f"unknown entry id(s): {', '.join(unknown)}; known: {', '.join(known)}")
    return [e for e in known if e in cfg.entries]


def cmd_verify(cfg: CliConfig) -> int:
    ctx = cfg.ctx
    reports = []
    for eid in _selected_entries(cfg):
        if eid == "remark":
            reports.append(verify_remark(ctx, order=cfg.order))
        else:
            reports.append(verify_entry(get_entry(eid), ctx))
    passed = sum(r.passed for r in reports)
    show = min(cfg.digits, 32)
    payload = {
        "digits": cfg.digits,
        "entries": [r.as_dict(cfg.digits) for r in reports],
        "summary": {"passed": passed, "total": len(reports)},
    }
    rows = [f"{'id':<8} {'lhs (Mellin)':<{show + 4}} {'rhs (table)':<{show + 4}} {'digits':>6}  result"]
    for r in reports:
        lhs = r.lhs.context.nstr(r.lhs, show)
        rhs = r.rhs.context.nstr(r.rhs, show)
        rows.append(
            f"{r.entry_id:<8} {lhs:<{show + 4}} {rhs:<{show + 4}} {r.agreed_digits:>6}  "
            + ("pass" if r.passed else "FAIL")
        )
    rows.append(f"{passed}/{len(reports)} pass")
    _emit(cfg, payload, rows)
    return EXIT_OK if passed == len(reports) else EXIT_FAIL


def cmd_identities(cfg: CliConfig) -> int:
    results = exact_suites(cfg.order) + numeric_suites(cfg.seed, cfg.ctx)
    ok = all(r.passed for r in results)
    payload = {
        "order": cfg.order,
        "seed": cfg.seed,
        "digits": cfg.digits,
        "suites": [r.as_dict() for r in results],
        "pass": ok,
    }
    rows = [
        f"{'pass' if r.passed else 'FAIL'}  {r.name:<36} cases={r.cases:<3} "
        + (r.detail if r.worst == 0 else f"worst={r.worst:.2e} ({r.detail})")
        for r in results
    ]
    rows.append(f"{sum(r.passed for r in results)}/{len(results)} suites pass")
    _emit(cfg, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_qexp(cfg: CliConfig, theta: str | None, scale: int) -> int:
    if theta is not None:
        if cfg.entries:
            raise UsageError("give either --entry or --theta, not both")
        try:
            kind = ThetaKind(theta)
        except ValueError:
            raise UsageError(f"unknown theta kind {theta!r}") from None
        label = f"{kind.value}(q^{scale})"
        series = form_qexp(form(1, (kind, scale, 1)), cfg.order)
    else:
        if len(cfg.entries) != 1:
            raise UsageError("qexp needs exactly one --entry (or --theta)")
        (eid,) = cfg.entries
        if eid not in entry_ids():
            raise UsageError(f"unknown entry id: {eid}")
        label = eid
        series = form_qexp(get_entry(eid).form, cfg.order)
    terms = list(series.terms())
    payload = {
        "series": label,
        "order": cfg.order,
        "coefficients": [[str(e), str(c)] for e, c in terms],
    }
    rows = [f"{label}  (exact below q^{cfg.order})"] + [f"q^{e}: {c}" for e, c in terms]
    _emit(cfg, payload, rows)
    return EXIT_OK


def cmd_hyp(cfg: CliConfig, upper: str, lower: str, z: str) -> int:
    ctx = cfg.ctx
    p = HypParams.of(_fraction_list(upper), _fraction_list(lower))
    zf = _fraction(z)
    if not 0 <= zf <= 1:
        raise DomainError(f"z must lie in [0, 1], got {zf}")
    if zf == 1:
        report = pfq_at_one(p, ctx, method=cfg.method)
    elif cfg.method == "integral" and zf > 0:
        report = euler_integral_eval(p, zf, ctx)
    else:
        report = pfq_series(p, zf, ctx)
    payload = {"params": str(p), "z": str(zf), **report.as_dict(cfg.digits)}
    _emit(cfg, payload, [ctx.mp.nstr(report.value, cfg.digits)])
    return EXIT_OK


def cmd_gamma(cfg: CliConfig, x: str) -> int:
    ctx = cfg.ctx
    xf = _fraction(x)
    value = gamma(xf, ctx)
    text = ctx.mp.nstr(value, cfg.digits)
    _emit(cfg, {"x": str(xf), "value": text}, [text])
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=30, help="target digits (default 30)")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized suites")
    common.add_argument("--order", type=int, default=2000, help="q-series truncation order")
    common.add_argument("--entry", action="append", default=[],
                        help="catalog id such as T1.xiii (repeatable, or comma separated)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--method", choices=("auto", "integral", "series", "closed"), default="auto",
                        help="evaluation route for 3F2 at z = 1")

    parser = argparse.ArgumentParser(
        prog="theta-lvalues",
        description="Verify L(f,1) evaluations of weight-3 theta products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="Mellin value against the tabulated value")
    sub.add_parser("identities", parents=[common], help="exact and randomized identity suites")
    q = sub.add_parser("qexp", parents=[common], help="exact q-expansion of an entry or theta series")
    q.add_argument("--theta", help="theta2, theta3, theta4, a, b or c")
    q.add_argument("--scale", type=int, default=1)
    h = sub.add_parser("hyp", parents=[common], help="(p+1)F(p) at a rational argument")
    h.add_argument("--upper", required=True, help="comma separated rationals, e.g. 1/2,1/2")
    h.add_argument("--lower", required=True)
    h.add_argument("--z", default="1")
    g = sub.add_parser("gamma", parents=[common], help="Gamma at a positive rational")
    g.add_argument("--x", required=True)
    return parser


def _config(ns: argparse.Namespace) -> CliConfig:
    entries = tuple(e.strip() for item in ns.entry for e in item.split(",") if e.strip())
    return CliConfig(ns.digits, ns.seed, ns.order, ns.format, entries, ns.method)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(ns)
        if ns.command == "verify":
            return cmd_verify(cfg)
        if ns.command == "identities":
            return cmd_identities(cfg)
        if ns.command == "qexp":
            if ns.scale < 1:
                raise UsageError("--scale must be positive")
            return cmd_qexp(cfg, ns.theta, ns.scale)
        if ns.command == "hyp":
            return cmd_hyp(cfg, ns.upper, ns.lower, ns.z)
        return cmd_gamma(cfg, ns.x)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PatternError, TruncationError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
