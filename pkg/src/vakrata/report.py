# ────────────────────────── src/vakrata/report.py ──────────────────────────
"""Human tables and the versioned JSON report (``docs/report.md``)."""
from __future__ import annotations

import json
import math
from typing import Any

import click

from vakrata.harness import FAIL, PASS, SKIPPED, VACUOUS, SuiteReport

__all__ = ["SCHEMA_VERSION", "NOTE", "report_dict", "to_json", "render_table", "dumps"]

SCHEMA_VERSION = 1

NOTE = (
    "Global statements (black-hole uniqueness, the Besse conjecture, sphere rigidity) need "
    "integral and level-set arguments and are not reproduced; this report verifies the "
    "pointwise identities those arguments rest on."
)

_COLOURS = {PASS: "green", FAIL: "red", SKIPPED: "yellow", VACUOUS: "cyan"}


def _clean(value: Any) -> Any:
    """Replace non-finite floats with ``None`` so the output is strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def report_dict(report: SuiteReport) -> dict:
    spec, opts = report.spec, report.options
    return _clean({
        "schema": SCHEMA_VERSION,
        "tool": "vakrata",
        "spec": spec.name,
        "dim": spec.dim,
        "params": {k: spec.params[k] for k in sorted(spec.params)},
        "tags": sorted(spec.tags),
        "seed": opts.seed,
        "order": report.order,
        "tolerance": opts.tolerance,
        "points": opts.points,
        "note": NOTE,
        "verdict": report.verdict,
        "counts": report.counts(),
        "results": [r.to_dict() for r in report.results],
        "expected": [e.to_dict() for e in report.expected],
        "negative_controls": [c.to_dict() for c in report.controls],
    })


def dumps(data: Any) -> str:
    return json.dumps(_clean(data), sort_keys=True, indent=2, ensure_ascii=False)


def to_json(report: SuiteReport) -> str:
    return dumps(report_dict(report))


def _verdict(v: str, colour: bool) -> str:
    text = f"{v:<12}"
    return click.style(text, fg=_COLOURS.get(v)) if colour else text


def _num(x: float | None) -> str:
    return "-" if x is None or not math.isfinite(x) else f"{x:.2e}"


def render_table(report: SuiteReport, colour: bool = False) -> str:
    spec = report.spec
    lines = [
        f"{spec.name}  (dim {spec.dim}, seed {report.options.seed}, "
        f"{report.options.points} points, jet order {report.order}, tol {report.options.tolerance:g})",
        NOTE,
        "",
        f"{'check':<22} {'verdict':<12} {'pts':>4} {'max rel':>9} {'max |L|':>9} {'max |R|':>9}  note",
    ]
    for r in report.results:
        note = r.reason or ""
        lines.append(
            f"{r.check:<22} {_verdict(r.verdict, colour)} {r.points:>4} {_num(r.max_rel):>9} "
            f"{_num(r.max_lhs):>9} {_num(r.max_rhs):>9}  {note}".rstrip()
        )
    if report.expected:
        lines += ["", f"{'expected value':<22} {'verdict':<12} {'expected':>12} {'observed':>12}  provenance"]
        for e in report.expected:
            lines.append(
                f"{e.label:<22} {_verdict(e.verdict, colour)} {e.expected:>12.6g} {e.observed:>12.6g}  "
                f"{e.provenance}{'  ' + e.reason if e.reason else ''}"
            )
    if report.controls:
        lines += ["", f"{'negative control':<22} {'verdict':<12} {'x tol':>10}  residual"]
        for c in report.controls:
            lines.append(
                f"{c.id:<22} {_verdict(c.verdict, colour)} {_num(c.ratio):>10}  {c.residual}"
                f"{'  ' + c.reason if c.reason else ''}"
            )
    counts = report.counts()
    lines += [
        "",
        f"{counts[PASS]} passed, {counts[VACUOUS]} vacuous, {counts[SKIPPED]} skipped, {counts[FAIL]} failed"
        f" -> {report.verdict.upper()}",
    ]
    return "\n".join(lines)
