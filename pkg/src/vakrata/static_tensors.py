# ─────────────────────── src/vakrata/static_tensors.py ──────────────────────
"""Cotton, Bach and the potential-dependent tensors of a static space.

All 3-tensors are antisymmetric in their first two slots.  With the
curvature conventions of :mod:`vakrata.curvature`::

    div4 W = -((n-3)/(n-2)) C                (slot for slot)
    B      = div2 div4 W / (n-3) + W̊r / (n-2) = (div C + W̊r) / (n-2)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from vakrata.curvature import (
    PointContext,
    connection_laplacian,
    covariant_derivative,
    differential,
    divergence,
    gradient,
    hessian,
    laplacian,
    memoized,
    potential,
    ricci,
    scalar,
    traceless_ricci,
    weyl,
)
from vakrata.errors import CriticalPointError, DimensionError
from vakrata.tensors import TensorValue, interior_first, interior_last, product, ring, wedge_1_2

__all__ = [
    "CRITICAL_FLOOR",
    "StaticContext",
    "static_context",
    "dD",
    "cotton",
    "cotton_divergence",
    "weyl_div4",
    "weyl_complete_divergence",
    "bach",
    "bach_via_cotton",
    "bach_divergence",
    "ring_W",
    "tensor_T",
    "hat_C",
    "tilde_i_gradf_W",
    "W_N",
    "i_N_z",
    "i_grad",
    "s_star_adjoint",
    "rough_laplacian_z",
]

log = logging.getLogger(__name__)

CRITICAL_FLOOR = 1e-14


# ──────────────────────────────────────────────────────────────────────────
# metric-only tensors
# ──────────────────────────────────────────────────────────────────────────
def dD(h: TensorValue, ctx: PointContext) -> TensorValue:
    """``(d^D h)(X,Y,Z) = (D_X h)(Y,Z) − (D_Y h)(X,Z)``."""
    dh = covariant_derivative(h, ctx)
    return dh - dh.rearrange("yxz->xyz")


@memoized
def cotton(ctx: PointContext) -> TensorValue:
    n = ctx.dim
    ds = scalar(ctx).partial()
    return dD(ricci(ctx), ctx) - wedge_1_2(ds, ctx.g) * (1.0 / (2 * (n - 1)))


@memoized
def cotton_divergence(ctx: PointContext, m: int) -> TensorValue:
    """``div^m C`` (first-slot divergences)."""
    prev = cotton(ctx) if m == 1 else cotton_divergence(ctx, m - 1)
    return divergence(prev, ctx)


@memoized
def weyl_div4(ctx: PointContext) -> TensorValue:
    return divergence(weyl(ctx), ctx, slot=3)


@memoized
def _weyl_div24(ctx: PointContext) -> TensorValue:
    return divergence(weyl_div4(ctx), ctx, slot=1)


@memoized
def weyl_complete_divergence(ctx: PointContext) -> TensorValue:
    """``div⁴W``: two first-slot divergences after the Bach double divergence."""
    return divergence(divergence(_weyl_div24(ctx), ctx), ctx)


def _require_dim(ctx: PointContext, least: int, what: str) -> None:
    if ctx.dim < least:
        raise DimensionError(f"{what} needs dimension at least {least}, {ctx.spec.name} has {ctx.dim}")


def ring_W(h: TensorValue, ctx: PointContext) -> TensorValue:
    """``W̊h(X,Y) = W(X,E_i,Y,E_j) h(E_i,E_j)``."""
    return ring(weyl(ctx), h, ctx)


@memoized
def bach(ctx: PointContext) -> TensorValue:
    _require_dim(ctx, 4, "the Bach tensor")
    n = ctx.dim
    return _weyl_div24(ctx) * (1.0 / (n - 3)) + ring_W(ricci(ctx), ctx) * (1.0 / (n - 2))


@memoized
def bach_via_cotton(ctx: PointContext) -> TensorValue:
    _require_dim(ctx, 4, "the Bach tensor")
    n = ctx.dim
    return (cotton_divergence(ctx, 1) + ring_W(ricci(ctx), ctx)) * (1.0 / (n - 2))


@memoized
def bach_divergence(ctx: PointContext, m: int) -> TensorValue:
    prev = bach(ctx) if m == 1 else bach_divergence(ctx, m - 1)
    return divergence(prev, ctx)


# ──────────────────────────────────────────────────────────────────────────
# potential-dependent tensors
# ──────────────────────────────────────────────────────────────────────────
@dataclass(eq=False)
class StaticContext:
    """The potential at one point, with ``N`` and ``α`` off the critical set."""
    ctx: PointContext
    f: TensorValue
    df: TensorValue
    grad_f: TensorValue
    grad_norm2: float
    normal: TensorValue | None = None
    alpha: float | None = None

    @property
    def cache(self) -> dict:
        return self.ctx.cache

    @property
    def dim(self) -> int:
        return self.ctx.dim

    @property
    def critical(self) -> bool:
        return self.normal is None

    def require_normal(self) -> TensorValue:
        if self.normal is None:
            raise CriticalPointError(
                f"{self.ctx.spec.name}: critical point of f, "
                f"|∇f|² = {self.grad_norm2:.3e} at {self.ctx.point.tolist()}"
            )
        return self.normal

    @classmethod
    def build(cls, ctx: PointContext, floor: float = CRITICAL_FLOOR) -> "StaticContext":
        f = potential(ctx)
        df = differential(ctx)
        grad = gradient(ctx)
        gn2 = product("a,a->", df, grad)
        scale = max(1.0, float(abs(ctx.g.components).max()))
        if gn2.value <= floor * scale:
            log.debug("%s: critical point of the potential at %s", ctx.spec.name, ctx.point.tolist())
            return cls(ctx, f, df, grad, gn2.value)
        normal = grad * TensorValue.from_jet(gn2.to_jet() ** -0.5)
        z = traceless_ricci(ctx)
        alpha = product("b,b->", product("ab,a->b", z, normal), normal).value
        return cls(ctx, f, df, grad, gn2.value, normal, alpha)


@memoized
def static_context(ctx: PointContext) -> StaticContext:
    return StaticContext.build(ctx)


def i_grad(t: TensorValue, sctx: StaticContext) -> TensorValue:
    """``i_{∇f} t``."""
    return interior_first(sctx.grad_f, t, sctx.ctx)


@memoized
def tensor_T(sctx: StaticContext) -> TensorValue:
    """``T = df∧z/(n−2) + i_{∇f}z∧g/((n−1)(n−2))``."""
    ctx = sctx.ctx
    _require_dim(ctx, 3, "the tensor T")
    n = ctx.dim
    z = traceless_ricci(ctx)
    return (
        wedge_1_2(sctx.df, z) * (1.0 / (n - 2))
        + wedge_1_2(i_grad(z, sctx), ctx.g) * (1.0 / ((n - 1) * (n - 2)))
    )


@memoized
def hat_C(sctx: StaticContext) -> TensorValue:
    """``Ĉ(X,Y) = C(Y,∇f,X)``."""
    return product("abc,b->ca", cotton(sctx.ctx), sctx.grad_f)


@memoized
def tilde_i_gradf_W(sctx: StaticContext) -> TensorValue:
    return interior_last(sctx.grad_f, weyl(sctx.ctx), sctx.ctx)


@memoized
def W_N(sctx: StaticContext) -> TensorValue:
    """``W_N(X,Y) = W(N,X,N,Y)``; undefined at critical points."""
    normal = sctx.require_normal()
    half = product("axcy,a->xcy", weyl(sctx.ctx), normal)
    return product("xcy,c->xy", half, normal)


@memoized
def i_N_z(sctx: StaticContext) -> TensorValue:
    return interior_first(sctx.require_normal(), traceless_ricci(sctx.ctx), sctx.ctx)


@memoized
def s_star_adjoint(sctx: StaticContext) -> TensorValue:
    """``s′*(f) = Ddf − (Δf) g − f r``."""
    ctx = sctx.ctx
    return hessian(ctx) - ctx.g * laplacian(ctx) - ricci(ctx) * sctx.f


@memoized
def rough_laplacian_z(ctx: PointContext) -> TensorValue:
    """``D*Dz``."""
    return connection_laplacian(traceless_ricci(ctx), ctx)
