# ───────────────────────── src/vakrata/harness.py ──────────────────────────
"""Run identity checks, expected values and negative controls over points.

Evaluation is point-major: one :class:`PointContext` per sample point is
shared by every selected check, so common tensors are computed once.
Points are independent and may run on a thread pool; aggregation is by
max over points, so results do not depend on scheduling.
"""
from __future__ import annotations

import fnmatch
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from vakrata.catalog import CatalogEntry, Expected, NegativeControl
from vakrata.curvature import PointContext, hessian, laplacian, ricci
from vakrata.errors import VakrataError
from vakrata.identities import REGULAR_FLOOR, IdentityCheck, registry, side_values
from vakrata.jets import MAX_ORDER
from vakrata.metric import MetricSpec
from vakrata.residuals import (
    QUANTITIES,
    besse_residual,
    eigen_residual,
    evaluate_quantity,
    static_vacuum_residual,
    vacuum_static_residual,
)
from vakrata.static_tensors import s_star_adjoint, static_context
from vakrata.tensors import frame_components, orthonormal_frame

__all__ = [
    "PASS",
    "FAIL",
    "SKIPPED",
    "VACUOUS",
    "CheckResult",
    "ExpectedResult",
    "ControlResult",
    "SuiteOptions",
    "SuiteReport",
    "select_checks",
    "run_check",
    "run_suite",
]

log = logging.getLogger(__name__)

PASS, FAIL, SKIPPED, VACUOUS = "pass", "fail", "skipped", "vacuous-pass"

VACUITY_FLOOR = 1e-12
MAX_SKIP_FRACTION = 0.2
CONTROL_MARGIN = 1e4


# ──────────────────────────────────────────────────────────────────────────
# results
# ──────────────────────────────────────────────────────────────────────────
@dataclass
class CheckResult:
    check: str
    spec: str
    verdict: str
    reason: str | None = None
    ref: str = ""
    order: int = 0
    points: int = 0
    skipped: int = 0
    filtered: int = 0
    max_abs: float = 0.0
    max_rel: float = 0.0
    max_lhs: float = 0.0
    max_rhs: float = 0.0
    worst_point: list[float] | None = None
    witness: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExpectedResult:
    label: str
    expected: float
    observed: float
    deviation: float
    tolerance: float
    provenance: str
    verdict: str
    reason: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ControlResult:
    id: str
    residual: str
    potential: str
    ratio: float
    verdict: str
    reason: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteOptions:
    points: int = 100
    seed: int = 0
    order: int | None = None
    tolerance: float = 1e-8
    threads: int = 1
    checks: Sequence[str] = ("*",)
    controls: bool = True


@dataclass
class SuiteReport:
    spec: MetricSpec
    options: SuiteOptions
    order: int
    results: list[CheckResult] = field(default_factory=list)
    expected: list[ExpectedResult] = field(default_factory=list)
    controls: list[ControlResult] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if any(r.verdict == FAIL for r in self.results):
            return FAIL
        if any(r.verdict == FAIL for r in self.expected):
            return FAIL
        if any(r.verdict == FAIL for r in self.controls):
            return FAIL
        return PASS

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0, VACUOUS: 0}
        for r in self.results:
            out[r.verdict] += 1
        return out


# ──────────────────────────────────────────────────────────────────────────
# per-point evaluation
# ──────────────────────────────────────────────────────────────────────────
@dataclass
class _Outcome:
    lhs: np.ndarray | None = None
    rhs: np.ndarray | None = None
    witness: float | None = None
    error: str | None = None
    filtered: bool = False


def _is_regular(ctx: PointContext) -> bool:
    try:
        sctx = static_context(ctx)
    except VakrataError:
        return False
    return abs(sctx.f.value) > REGULAR_FLOOR and sctx.grad_norm2 > REGULAR_FLOOR


def _evaluate(check: IdentityCheck, ctx: PointContext) -> _Outcome:
    try:
        lhs = side_values(check.lhs(ctx))
        rhs = side_values(check.rhs(ctx))
        np.broadcast(lhs, rhs)
        witness = None
        if check.witness is not None:
            witness = float(np.max(np.abs(side_values(check.witness(ctx)))))
    except (VakrataError, ValueError, ZeroDivisionError) as exc:
        log.debug("%s at %s: %s", check.id, ctx.point.tolist(), exc)
        return _Outcome(error=str(exc))
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        return _Outcome(error="non-finite value")
    return _Outcome(lhs, rhs, witness)


def _evaluate_point(
    spec: MetricSpec,
    point: np.ndarray,
    order: int,
    checks: Sequence[IdentityCheck],
    expected: Sequence[Expected],
) -> tuple[dict[str, _Outcome], list[np.ndarray | str]]:
    try:
        ctx = PointContext.build(spec, point, order)
    except VakrataError as exc:
        log.info("%s: skipping point %s: %s", spec.name, point.tolist(), exc)
        return {c.id: _Outcome(error=str(exc)) for c in checks}, [str(exc)] * len(expected)

    outcomes: dict[str, _Outcome] = {}
    regular: bool | None = None
    for check in checks:
        if check.regular_only:
            if regular is None:
                regular = _is_regular(ctx)
            if not regular:
                outcomes[check.id] = _Outcome(filtered=True)
                continue
        outcomes[check.id] = _evaluate(check, ctx)

    values: list[np.ndarray | str] = []
    frame = orthonormal_frame(ctx.g.components) if expected else None
    for item in expected:
        try:
            t = evaluate_quantity(item.quantity, ctx)
            comps = np.asarray(frame_components(t, frame, ctx)) if t.valence else np.asarray(t.value)
            values.append(comps)
        except VakrataError as exc:
            values.append(str(exc))
    return outcomes, values


def _map_points(fn: Callable, points: np.ndarray, threads: int, on_point: Callable[[], None] | None) -> list:
    def run(p):
        out = fn(p)
        if on_point is not None:
            on_point()
        return out

    if threads <= 1:
        return [run(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, points))


# ──────────────────────────────────────────────────────────────────────────
# aggregation
# ──────────────────────────────────────────────────────────────────────────
def _aggregate(
    check: IdentityCheck,
    spec: MetricSpec,
    points: np.ndarray,
    outcomes: Sequence[_Outcome],
    tolerance: float,
) -> CheckResult:
    result = CheckResult(check.id, spec.name, FAIL, ref=check.ref, order=check.depth)
    errors = [o.error for o in outcomes if o.error is not None]
    result.filtered = sum(o.filtered for o in outcomes)
    result.skipped = len(errors)
    evaluated = [(p, o) for p, o in zip(points, outcomes) if o.lhs is not None]
    result.points = len(evaluated)

    if not evaluated:
        if result.filtered and not errors:
            result.verdict, result.reason = SKIPPED, "no regular points"
        else:
            result.reason = f"no point could be evaluated: {errors[0] if errors else 'no points'}"
        return result
    candidates = len(outcomes) - result.filtered
    if len(errors) > MAX_SKIP_FRACTION * candidates:
        result.reason = f"{len(errors)} of {candidates} points could not be evaluated: {errors[0]}"
        return result
    minimum = max(1, len(outcomes) // 10)
    if len(evaluated) < minimum:
        result.reason = f"only {len(evaluated)} points evaluated, need {minimum}"
        return result

    worst = -1.0
    for p, o in evaluated:
        diff = float(np.max(np.abs(o.lhs - o.rhs))) if o.lhs.size else 0.0
        result.max_lhs = max(result.max_lhs, float(np.max(np.abs(o.lhs), initial=0.0)))
        result.max_rhs = max(result.max_rhs, float(np.max(np.abs(o.rhs), initial=0.0)))
        if diff > worst:
            worst = diff
            result.worst_point = [float(x) for x in p]
    result.max_abs = worst
    result.max_rel = worst / (1.0 + result.max_lhs + result.max_rhs)

    if result.max_rel >= tolerance:
        result.reason = f"relative residual {result.max_rel:.3e} exceeds {tolerance:g}"
        return result
    if check.witness is not None:
        result.witness = max(o.witness for _, o in evaluated)
        if result.witness <= check.witness_floor:
            result.reason = f"witness {result.witness:.3e} does not exceed {check.witness_floor:g}"
            return result
    if check.vacuity and "generic" in spec.tags and max(result.max_lhs, result.max_rhs) <= VACUITY_FLOOR:
        result.verdict, result.reason = VACUOUS, "both sides vanish"
        return result
    result.verdict = PASS
    return result


def _expected_results(
    expected: Sequence[Expected], values: Sequence[Sequence[np.ndarray | str]]
) -> list[ExpectedResult]:
    out = []
    for k, item in enumerate(expected):
        per_point = [v[k] for v in values]
        failures = [v for v in per_point if isinstance(v, str)]
        arrays = [v for v in per_point if not isinstance(v, str)]
        base = ExpectedResult(item.label, item.value, float("nan"), float("inf"), item.tolerance,
                              item.provenance, FAIL)
        if not arrays:
            base.reason = failures[0] if failures else "no points"
            out.append(base)
            continue
        if item.indices is None:
            observed = max(float(np.max(np.abs(a), initial=0.0)) for a in arrays)
            deviation = abs(observed - item.value)
        else:
            comps = [float(a[item.indices]) if item.indices else float(a) for a in arrays]
            deviations = [abs(c - item.value) for c in comps]
            j = int(np.argmax(deviations))
            observed, deviation = comps[j], deviations[j]
        deviation /= max(1.0, abs(item.value))
        base.observed, base.deviation = observed, deviation
        if failures:
            base.reason = f"{len(failures)} points could not be evaluated: {failures[0]}"
        elif deviation < item.tolerance:
            base.verdict = PASS
        else:
            base.reason = f"relative deviation {deviation:.3e} exceeds {item.tolerance:g}"
        out.append(base)
    return out


# ──────────────────────────────────────────────────────────────────────────
# negative controls
# ──────────────────────────────────────────────────────────────────────────
def _control_sides(kind: str, ctx: PointContext) -> tuple[np.ndarray, np.ndarray]:
    """``(residual, leading term)`` for a residual operator."""
    sctx = static_context(ctx)
    if kind == "vacuum_static":
        return side_values(vacuum_static_residual(sctx)), side_values(hessian(ctx))
    if kind == "eigen":
        return side_values(eigen_residual(sctx)), side_values(laplacian(ctx))
    if kind == "static_vacuum":
        res = static_vacuum_residual(sctx)
        lead = np.concatenate([side_values(ricci(ctx) * sctx.f), side_values(res.laplacian)])
        return np.concatenate([side_values(res.tensor), side_values(res.laplacian)]), lead
    if kind == "besse":
        return side_values(besse_residual(sctx)), side_values(s_star_adjoint(sctx))
    raise ValueError(f"unknown residual {kind!r}")


def _run_control(
    control: NegativeControl, spec: MetricSpec, points: np.ndarray, options: SuiteOptions
) -> ControlResult:
    result = ControlResult(control.id, control.residual, control.potential, 0.0, FAIL)
    try:
        wrong = spec.with_potential(control.potential, name=control.id)
    except VakrataError as exc:
        result.reason = str(exc)
        return result

    def one(p):
        try:
            ctx = PointContext.build(wrong, p, 2)
            return _control_sides(control.residual, ctx)
        except VakrataError as exc:
            return str(exc)

    sides = [one(p) for p in points]
    ok = [s for s in sides if not isinstance(s, str)]
    if not ok:
        result.reason = next((s for s in sides if isinstance(s, str)), "no points")
        return result
    res = max(float(np.max(np.abs(r))) for r, _ in ok)
    lead = max(float(np.max(np.abs(t))) for _, t in ok)
    rel = res / (1.0 + lead + max(float(np.max(np.abs(t - r))) for r, t in ok))
    result.ratio = rel / options.tolerance
    if result.ratio >= CONTROL_MARGIN:
        result.verdict = PASS
    else:
        result.reason = f"wrong potential accepted: residual only {result.ratio:.3g}x tolerance"
    return result


# ──────────────────────────────────────────────────────────────────────────
# entry points
# ──────────────────────────────────────────────────────────────────────────
def select_checks(patterns: Iterable[str] = ("*",)) -> list[IdentityCheck]:
    """Registry checks whose id matches any glob in ``patterns``."""
    patterns = list(patterns) or ["*"]
    return [c for c in registry() if any(fnmatch.fnmatchcase(c.id, pat) for pat in patterns)]


def _plan(
    spec: MetricSpec, checks: Sequence[IdentityCheck], order: int | None
) -> tuple[list[IdentityCheck], list[CheckResult]]:
    active, skipped = [], []
    for check in checks:
        reason = check.skip_reason(spec)
        if reason is None and order is not None and check.depth > order:
            reason = f"needs jet order {check.depth}, run uses {order}"
        if reason is None:
            active.append(check)
        else:
            skipped.append(CheckResult(check.id, spec.name, SKIPPED, reason, ref=check.ref, order=check.depth))
    return active, skipped


def _order_for(checks: Sequence[IdentityCheck], expected: Sequence[Expected]) -> int:
    depths = [c.depth for c in checks] + [QUANTITIES[e.quantity][1] for e in expected if e.quantity in QUANTITIES]
    return min(MAX_ORDER, max([2] + depths))


def run_check(
    check: IdentityCheck,
    spec: MetricSpec,
    points: np.ndarray,
    tolerance: float = 1e-8,
    order: int | None = None,
) -> CheckResult:
    """Evaluate one check at ``points`` and aggregate."""
    active, skipped = _plan(spec, [check], order)
    if skipped:
        return skipped[0]
    order = order or _order_for(active, ())
    points = np.asarray(points, dtype=float)
    outcomes = [_evaluate_point(spec, p, order, active, ())[0][check.id] for p in points]
    return _aggregate(check, spec, points, outcomes, tolerance)


def run_suite(
    spec: MetricSpec,
    options: SuiteOptions | None = None,
    entry: CatalogEntry | None = None,
    on_point: Callable[[], None] | None = None,
) -> SuiteReport:
    """Run every selected check, plus the entry's expected values and controls."""
    options = options or SuiteOptions()
    checks = select_checks(options.checks)
    active, skipped = _plan(spec, checks, options.order)
    expected = list(entry.expected) if entry is not None else []
    wildcard = any(p == "*" for p in options.checks)
    if not wildcard and not any(fnmatch.fnmatchcase("expected_values", p) for p in options.checks):
        expected = []
    order = options.order or _order_for(active, expected)
    points = spec.sample_points(options.points, options.seed)
    log.info("%s: %d checks at %d points, jet order %d", spec.name, len(active), len(points), order)

    per_point = _map_points(
        lambda p: _evaluate_point(spec, p, order, active, expected), points, options.threads, on_point
    )
    report = SuiteReport(spec, options, order)
    results = list(skipped)
    for check in active:
        outcomes = [pp[0][check.id] for pp in per_point]
        results.append(_aggregate(check, spec, points, outcomes, options.tolerance))
    report.results = sorted(results, key=lambda r: r.check)
    report.expected = _expected_results(expected, [pp[1] for pp in per_point])

    if entry is not None and options.controls:
        report.controls = [_run_control(c, spec, points, options) for c in entry.negative_controls]
    for r in report.results:
        if r.verdict == FAIL:
            log.warning("%s: %s failed: %s", spec.name, r.check, r.reason)
    return report
