# ───────────────────────── src/vakrata/curvature.py ─────────────────────────
"""Levi-Civita calculus at a chart point, driven by jets of the metric.

Conventions: ``R[a,b,c,d]`` is chosen so that ``R(E1,E2,E1,E2)`` is the
sectional curvature; Ricci traces slots 1 and 3; covariant derivatives put
the new slot first; ``divergence(t, slot=k)`` contracts that slot with the
derivative slot.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from vakrata.errors import JetOrderError, MetricError, MissingPotentialError, TensorShapeError
from vakrata.jets import MAX_ORDER, eval_jet, layout
from vakrata.metric import MetricSpec
from vakrata.tensors import (
    CO,
    CONTRA,
    TensorValue,
    contract,
    kulkarni_nomizu,
    letters,
    product,
    raise_slot,
)

__all__ = [
    "DEFAULT_ORDER",
    "PointContext",
    "TensorField",
    "memoized",
    "christoffel",
    "riemann",
    "ricci",
    "scalar",
    "traceless_ricci",
    "weyl",
    "covariant_derivative",
    "divergence",
    "iterated_divergence",
    "potential",
    "differential",
    "gradient",
    "hessian",
    "laplacian",
    "connection_laplacian",
]

log = logging.getLogger(__name__)

DEFAULT_ORDER = 6
INVERSE_RESIDUAL = 1e-10


# ──────────────────────────────────────────────────────────────────────────
# point context
# ──────────────────────────────────────────────────────────────────────────
@dataclass(eq=False)
class PointContext:
    spec: MetricSpec
    point: np.ndarray
    order: int
    g: TensorValue
    ginv: TensorValue
    cache: dict[Any, Any] = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.spec.dim

    @classmethod
    def build(cls, spec: MetricSpec, point: Sequence[float], order: int = DEFAULT_ORDER) -> "PointContext":
        point = np.asarray(point, dtype=float)
        n = spec.dim
        if point.shape != (n,):
            raise TensorShapeError(f"{spec.name} is {n}-dimensional, got a point of shape {point.shape}")
        if not 2 <= order <= MAX_ORDER:
            raise JetOrderError(f"jet order must lie in [2, {MAX_ORDER}], got {order}")
        lay = layout(n, order)
        coeffs = np.zeros((lay.size, n, n))
        for i in range(n):
            for j in range(i, n):
                jet = eval_jet(spec.metric[i][j], point, order)
                coeffs[:, i, j] = coeffs[:, j, i] = jet.coeffs
        g = TensorValue(n, order, coeffs)
        ginv = _inverse(g, spec.name, point)
        return cls(spec, point, order, g, ginv)


def _inverse(g: TensorValue, name: str, point: np.ndarray) -> TensorValue:
    """Jet inverse via the Neumann series around the value at the point."""
    g0 = g.components
    try:
        np.linalg.cholesky(g0)
    except np.linalg.LinAlgError:
        raise MetricError(f"{name}: metric is not positive definite at {point.tolist()}") from None
    g0inv = np.linalg.inv(g0)
    n, order = g.dim, g.order
    c0inv = TensorValue.constant(g0inv, order, (CONTRA, CONTRA))
    h = TensorValue(n, order, g.coeffs - TensorValue.constant(g0, order).coeffs)
    # -G0^{-1} H, nilpotent to order K+1
    step = -product("ab,bc->ac", c0inv, h)
    term, total = c0inv, c0inv
    for _ in range(order):
        term = product("ab,bc->ac", step, term)
        total = total + term
    ginv = TensorValue(n, order, total.coeffs, (CONTRA, CONTRA))

    ident = product("ab,bc->ac", g, ginv).coeffs
    ident[0] -= np.eye(n)
    scale = max(1.0, float(np.abs(g.coeffs).max()) * float(np.abs(ginv.coeffs).max()))
    resid = float(np.abs(ident).max())
    if resid > INVERSE_RESIDUAL * scale:
        raise MetricError(f"{name}: inverse metric residual {resid:.3e} at {point.tolist()}")
    return ginv


def memoized(fn: Callable) -> Callable:
    """Cache ``fn(owner, *args)`` in ``owner.cache`` keyed by name and args."""

    @functools.wraps(fn)
    def wrapper(owner, *args):
        key = (fn.__name__,) + args
        cache = owner.cache
        if key not in cache:
            cache[key] = fn(owner, *args)
        return cache[key]

    return wrapper


# ──────────────────────────────────────────────────────────────────────────
# tensor fields
# ──────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class TensorField:
    """A named rule ``PointContext -> TensorValue`` with its metric-derivative depth."""
    name: str
    valence: int
    depth: int
    rule: Callable[[PointContext], TensorValue] = field(compare=False, repr=False)

    def evaluate(self, ctx: PointContext) -> TensorValue:
        if self.depth > ctx.order:
            raise JetOrderError(f"{self.name} needs jet order {self.depth}, context has {ctx.order}")
        key = ("field", self.name)
        if key not in ctx.cache:
            ctx.cache[key] = self.rule(ctx)
        return ctx.cache[key]

    def divergence(self, slot: int = 0) -> "TensorField":
        if not 0 <= slot < self.valence:
            raise TensorShapeError(f"{self.name} has no slot {slot + 1}")
        label = f"div({self.name})" if slot == 0 else f"div{slot + 1}({self.name})"
        return TensorField(label, self.valence - 1, self.depth + 1,
                           lambda ctx, f=self, s=slot: divergence(f.evaluate(ctx), ctx, s))


# ──────────────────────────────────────────────────────────────────────────
# connection and curvature
# ──────────────────────────────────────────────────────────────────────────
@memoized
def metric_derivative(ctx: PointContext) -> TensorValue:
    return ctx.g.partial()


@memoized
def christoffel_first(ctx: PointContext) -> TensorValue:
    """``Γ_{k,ij} = ½(∂_i g_jk + ∂_j g_ik − ∂_k g_ij)`` indexed ``[k,i,j]``."""
    dg = metric_derivative(ctx)
    return (dg.rearrange("ijk->kij") + dg.rearrange("jik->kij") - dg) * 0.5


@memoized
def christoffel(ctx: PointContext) -> TensorValue:
    """``Γ^m_{ij}`` indexed ``[m,i,j]``."""
    return product("mk,kij->mij", ctx.ginv, christoffel_first(ctx))


@memoized
def riemann(ctx: PointContext) -> TensorValue:
    ddg = metric_derivative(ctx).partial()
    gam, gam1 = christoffel(ctx), christoffel_first(ctx)
    second = (
        ddg.rearrange("bcad->abcd")
        + ddg.rearrange("adbc->abcd")
        - ddg.rearrange("acbd->abcd")
        - ddg.rearrange("bdac->abcd")
    ) * 0.5
    k = ddg.order
    quad = product("ebc,ead->abcd", gam, gam1, k) - product("ebd,eac->abcd", gam, gam1, k)
    return second + quad


@memoized
def ricci(ctx: PointContext) -> TensorValue:
    return contract(riemann(ctx), 0, 2, ctx)


@memoized
def scalar(ctx: PointContext) -> TensorValue:
    return contract(ricci(ctx), 0, 1, ctx)


@memoized
def traceless_ricci(ctx: PointContext) -> TensorValue:
    return ricci(ctx) - ctx.g * scalar(ctx) * (1.0 / ctx.dim)


@functools.lru_cache(maxsize=None)
def _warn_weyl_dim3(name: str) -> None:
    log.warning("%s: Weyl tensor vanishes identically in dimension 3", name)


@memoized
def weyl(ctx: PointContext) -> TensorValue:
    n = ctx.dim
    R = riemann(ctx)
    if n <= 3:
        if n == 3:
            _warn_weyl_dim3(ctx.spec.name)
        return TensorValue.zeros(n, R.order, (CO,) * 4)
    g = ctx.g.truncate(R.order)
    z = traceless_ricci(ctx)
    s = scalar(ctx)
    gg = kulkarni_nomizu(g, g) * s * (1.0 / (2 * n * (n - 1)))
    zg = kulkarni_nomizu(z, g) * (1.0 / (n - 2))
    return R - gg - zg


# ──────────────────────────────────────────────────────────────────────────
# covariant calculus
# ──────────────────────────────────────────────────────────────────────────
def covariant_derivative(t: TensorValue, ctx: PointContext) -> TensorValue:
    """``(DT)(V; X1..Xk)`` with the derivative slot first."""
    if t.order == 0:
        raise JetOrderError("jet order exhausted: cannot differentiate an order-0 tensor")
    out = t.partial()
    if not t.valence:
        return out
    gam = christoffel(ctx)
    s = letters(t.valence)
    # y: derivative slot, z: summed index
    for j, var in enumerate(t.variance):
        ts = s[:j] + "z" + s[j + 1:]
        if var == CO:
            out = out - product(f"zy{s[j]},{ts}->y{s}", gam, t, out.order)
        else:
            out = out + product(f"{s[j]}yz,{ts}->y{s}", gam, t, out.order)
    return out


def divergence(t: TensorValue, ctx: PointContext, slot: int = 0) -> TensorValue:
    """Contract the derivative slot of ``Dt`` with slot ``slot`` of ``t``."""
    if not 0 <= slot < t.valence:
        raise TensorShapeError(f"cannot take the divergence on slot {slot + 1} of a valence-{t.valence} tensor")
    return contract(covariant_derivative(t, ctx), 0, slot + 1, ctx)


def iterated_divergence(
    field: TensorField, m: int, ctx: PointContext, slots: Sequence[int] | None = None
) -> TensorValue:
    slots = list(slots) if slots is not None else [0] * m
    if len(slots) != m:
        raise ValueError("one slot per divergence")
    if field.depth + m > ctx.order:
        raise JetOrderError(f"div^{m} of {field.name} needs jet order {field.depth + m}, context has {ctx.order}")
    current = field
    for s in slots:
        current = current.divergence(s)
    return current.evaluate(ctx)


# ──────────────────────────────────────────────────────────────────────────
# potential
# ──────────────────────────────────────────────────────────────────────────
@memoized
def potential(ctx: PointContext) -> TensorValue:
    if ctx.spec.potential is None:
        raise MissingPotentialError(ctx.spec.name)
    return TensorValue.from_jet(eval_jet(ctx.spec.potential, ctx.point, ctx.order))


def differential(ctx: PointContext, u: TensorValue | None = None) -> TensorValue:
    if u is None:
        return _differential(ctx)
    return u.partial()


@memoized
def _differential(ctx: PointContext) -> TensorValue:
    return potential(ctx).partial()


def gradient(ctx: PointContext, u: TensorValue | None = None) -> TensorValue:
    return raise_slot(differential(ctx, u), 0, ctx)


def hessian(ctx: PointContext, u: TensorValue | None = None) -> TensorValue:
    if u is None:
        return _hessian(ctx)
    return covariant_derivative(u.partial(), ctx)


@memoized
def _hessian(ctx: PointContext) -> TensorValue:
    return covariant_derivative(_differential(ctx), ctx)


def laplacian(ctx: PointContext, u: TensorValue | None = None) -> TensorValue:
    """Trace of the Hessian (non-positive spectrum convention)."""
    return contract(hessian(ctx, u), 0, 1, ctx)


def connection_laplacian(t: TensorValue, ctx: PointContext) -> TensorValue:
    """``D*D t = −Σ D²_{E_i,E_i} t``."""
    ddt = covariant_derivative(covariant_derivative(t, ctx), ctx)
    return -contract(ddt, 0, 1, ctx)
