# ───────────────────────── src/vakrata/residuals.py ─────────────────────────
"""Residuals of the defining equations, and the named quantities ``eval`` prints."""
from __future__ import annotations

import logging
from typing import Callable, NamedTuple

from vakrata.errors import JetOrderError
from vakrata.curvature import PointContext, hessian, laplacian, ricci, riemann, scalar, traceless_ricci, weyl
from vakrata.static_tensors import (
    StaticContext,
    bach,
    bach_divergence,
    cotton,
    hat_C,
    ring_W,
    s_star_adjoint,
    static_context,
    tensor_T,
    weyl_complete_divergence,
)
from vakrata.tensors import TensorValue

__all__ = [
    "StaticVacuumResidual",
    "vacuum_static_residual",
    "eigen_residual",
    "static_vacuum_residual",
    "besse_residual",
    "perfect_fluid_residual",
    "QUANTITIES",
    "evaluate_quantity",
]

log = logging.getLogger(__name__)

SCALAR_FLAT_TOL = 1e-8


def vacuum_static_residual(sctx: StaticContext) -> TensorValue:
    """``Ddf − (r − s/(n−1) g) f``."""
    ctx = sctx.ctx
    n = ctx.dim
    rhs = (ricci(ctx) - ctx.g * scalar(ctx) * (1.0 / (n - 1))) * sctx.f
    return hessian(ctx) - rhs


def eigen_residual(sctx: StaticContext) -> TensorValue:
    """``Δf + s f/(n−1)``."""
    ctx = sctx.ctx
    return laplacian(ctx) + scalar(ctx) * sctx.f * (1.0 / (ctx.dim - 1))


class StaticVacuumResidual(NamedTuple):
    tensor: TensorValue
    laplacian: TensorValue
    scalar: float


def static_vacuum_residual(sctx: StaticContext) -> StaticVacuumResidual:
    """``(h r − Ddh, Δh)`` plus the scalar curvature, which must vanish."""
    ctx = sctx.ctx
    s = scalar(ctx).value
    if abs(s) > SCALAR_FLAT_TOL * max(1.0, ricci(ctx).max_abs()):
        log.warning("%s: static vacuum metric has scalar curvature %.3e at %s", ctx.spec.name, s, ctx.point.tolist())
    return StaticVacuumResidual(ricci(ctx) * sctx.f - hessian(ctx), laplacian(ctx), s)


def besse_residual(sctx: StaticContext) -> TensorValue:
    """``s′*(f) − z``."""
    return s_star_adjoint(sctx) - traceless_ricci(sctx.ctx)


def perfect_fluid_residual(sctx: StaticContext) -> TensorValue:
    """``Ddf − (r − s/(n−1) g) f − (1/n)(s f/(n−1) + Δf) g``.

    Zero for static perfect-fluid potentials; vacuum static potentials make
    both brackets vanish.
    """
    ctx = sctx.ctx
    n = ctx.dim
    trace_part = (scalar(ctx) * sctx.f * (1.0 / (n - 1)) + laplacian(ctx)) * (1.0 / n)
    return vacuum_static_residual(sctx) - ctx.g * trace_part


# ──────────────────────────────────────────────────────────────────────────
# named quantities
# ──────────────────────────────────────────────────────────────────────────
def _static(fn: Callable[[StaticContext], TensorValue]) -> Callable[[PointContext], TensorValue]:
    return lambda ctx: fn(static_context(ctx))


QUANTITIES: dict[str, tuple[Callable[[PointContext], TensorValue], int, bool]] = {
    # name: (rule, metric-derivative depth, needs potential)
    "g": (lambda ctx: ctx.g, 0, False),
    "riemann": (riemann, 2, False),
    "ricci": (ricci, 2, False),
    "scalar": (scalar, 2, False),
    "z": (traceless_ricci, 2, False),
    "weyl": (weyl, 2, False),
    "cotton": (cotton, 3, False),
    "bach": (bach, 4, False),
    "T": (_static(tensor_T), 2, True),
    "hatC": (_static(hat_C), 3, True),
    "ringWz": (lambda ctx: ring_W(traceless_ricci(ctx), ctx), 2, False),
    "ringWr": (lambda ctx: ring_W(ricci(ctx), ctx), 2, False),
    "divB": (lambda ctx: bach_divergence(ctx, 1), 5, False),
    "div2B": (lambda ctx: bach_divergence(ctx, 2), 6, False),
    "div4W": (weyl_complete_divergence, 6, False),
    "static_residual": (_static(vacuum_static_residual), 2, True),
    "besse_residual": (_static(besse_residual), 2, True),
}


def evaluate_quantity(name: str, ctx: PointContext) -> TensorValue:
    rule, depth, _ = QUANTITIES[name]
    if depth > ctx.order:
        raise JetOrderError(f"{name} needs jet order {depth}, got {ctx.order}")
    return rule(ctx)
