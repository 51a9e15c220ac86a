# ──────────────────────── src/vakrata/identities.py ─────────────────────────
"""Registry of pointwise identities between curvature and potential tensors.

Each :class:`IdentityCheck` pairs two builders ``PointContext -> side`` whose
values must agree at every sampled point.  A side is a :class:`TensorValue`
(compared by its components at the point) or a plain array for stacked
checks.  Checks gate themselves on dimension, potential, constant scalar
curvature and tags; :meth:`IdentityCheck.skip_reason` explains a gate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from vakrata.curvature import (
    PointContext,
    covariant_derivative,
    divergence,
    hessian,
    laplacian,
    ricci,
    riemann,
    scalar,
    traceless_ricci,
    weyl,
)
from vakrata.metric import MetricSpec
from vakrata.residuals import perfect_fluid_residual, vacuum_static_residual
from vakrata.static_tensors import (
    W_N,
    bach,
    bach_divergence,
    bach_via_cotton,
    cotton,
    cotton_divergence,
    dD,
    hat_C,
    i_N_z,
    i_grad,
    ring_W,
    rough_laplacian_z,
    s_star_adjoint,
    static_context,
    tensor_T,
    tilde_i_gradf_W,
    weyl_complete_divergence,
)
from vakrata.tensors import (
    TensorValue,
    contract,
    covariant,
    frame_components,
    inner,
    norm2,
    orthonormal_frame,
    product,
    raise_slot,
    wedge_1_2,
    zz,
)

__all__ = ["Side", "IdentityCheck", "registry", "get_check", "side_values", "REGULAR_FLOOR"]

log = logging.getLogger(__name__)

Side = Union[TensorValue, np.ndarray, float]
Builder = Callable[[PointContext], Side]

# |f| and |∇f|² must exceed this where a check divides by them
REGULAR_FLOOR = 0.05


def side_values(side: Side) -> np.ndarray:
    """Component values of one side at the base point, as a flat array."""
    if isinstance(side, TensorValue):
        return np.ravel(side.components)
    return np.ravel(np.asarray(side, dtype=float))


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    ref: str
    depth: int
    lhs: Builder = field(repr=False, compare=False)
    rhs: Builder = field(repr=False, compare=False)
    min_dim: int = 3
    max_dim: int | None = None
    potential: bool = False
    constant_scalar: bool = False
    tags: frozenset[str] = frozenset()
    regular_only: bool = False
    vacuity: bool = True
    witness: Builder | None = field(default=None, repr=False, compare=False)
    witness_floor: float = 1e-3

    def skip_reason(self, spec: MetricSpec) -> str | None:
        n = spec.dim
        if n < self.min_dim:
            return f"requires dimension >= {self.min_dim}"
        if self.max_dim is not None and n > self.max_dim:
            return f"requires dimension <= {self.max_dim}"
        if self.potential and spec.potential is None:
            return "requires a potential"
        if self.constant_scalar and not spec.constant_scalar:
            return "requires constant scalar curvature"
        if self.tags and not (self.tags & spec.tags):
            return "requires tag " + " or ".join(sorted(self.tags))
        return None

    def gates(self) -> list[str]:
        out = []
        if self.max_dim == self.min_dim:
            out.append(f"n = {self.min_dim}")
        else:
            out.append(f"n >= {self.min_dim}")
            if self.max_dim is not None:
                out.append(f"n <= {self.max_dim}")
        if self.potential:
            out.append("potential")
        if self.constant_scalar:
            out.append("constant s")
        if self.tags:
            out.append("|".join(sorted(self.tags)))
        if self.regular_only:
            out.append("regular points")
        return out

    def describe(self) -> dict:
        return {"id": self.id, "ref": self.ref, "order": self.depth, "gates": self.gates()}


# ──────────────────────────────────────────────────────────────────────────
# building blocks
# ──────────────────────────────────────────────────────────────────────────
def _c(n: int) -> float:
    return (n - 3) / (n - 2)


def _raised(t: TensorValue, ctx: PointContext) -> TensorValue:
    for i in range(t.valence):
        t = raise_slot(t, i, ctx)
    return t


def _pair_first(t3: TensorValue, h: TensorValue, ctx: PointContext) -> TensorValue:
    """The 1-form ``X ↦ ⟨i_X t, h⟩``."""
    return product("abc,bc->a", covariant(t3, ctx), _raised(h, ctx))


def _at_grad(t: TensorValue, ctx: PointContext) -> TensorValue:
    """Insert ``∇f`` into the first slot of a covariant tensor."""
    s = "abcd"[: t.valence]
    return product(f"{s[0]},{s}->{s[1:]}", static_context(ctx).grad_f, covariant(t, ctx))


def _f(ctx: PointContext) -> TensorValue:
    return static_context(ctx).f


def _z(ctx: PointContext) -> TensorValue:
    return traceless_ricci(ctx)


def _div_z_along_grad(ctx: PointContext) -> TensorValue:
    """``D_{∇f} z``."""
    return _at_grad(covariant_derivative(_z(ctx), ctx), ctx)


def _weyl_cotton_pairing(ctx: PointContext) -> TensorValue:
    """``X ↦ ⟨ĩ_X W, C⟩``."""
    return product("abcx,abc->x", covariant(weyl(ctx), ctx), _raised(cotton(ctx), ctx))


def _div_T(ctx: PointContext, m: int = 1) -> TensorValue:
    t = tensor_T(static_context(ctx))
    for _ in range(m):
        t = divergence(t, ctx)
    return t


def _stack(*parts: Side) -> np.ndarray:
    return np.concatenate([side_values(p) for p in parts])


def _zeros_like(builder: Builder) -> Builder:
    return lambda ctx: np.zeros_like(side_values(builder(ctx)))


# ──────────────────────────────────────────────────────────────────────────
# metric identities
# ──────────────────────────────────────────────────────────────────────────
def _div_weyl(ctx):
    return divergence(weyl(ctx), ctx, 0)


def _cotton_cycled(ctx):
    return cotton(ctx).rearrange("bca->abc") * _c(ctx.dim)


def _div_bach_rhs(ctx):
    n = ctx.dim
    return _pair_first(cotton(ctx), _z(ctx), ctx) * ((n - 4) / (n - 2) ** 2)


def _cotton_z_bracket(ctx):
    """``½|C|² + ⟨div C, z⟩``."""
    return norm2(cotton(ctx), ctx) * 0.5 + inner(cotton_divergence(ctx, 1), _z(ctx), ctx)


def _div2_bach_rhs(ctx):
    n = ctx.dim
    return _cotton_z_bracket(ctx) * ((n - 4) / (n - 2) ** 2)


def _div_cotton_rhs(ctx):
    n = ctx.dim
    z, s = _z(ctx), scalar(ctx)
    return (
        -rough_laplacian_z(ctx)
        - zz(z, ctx) * (n / (n - 2))
        - z * s * (1.0 / (n - 1))
        + ring_W(z, ctx)
        + ctx.g * norm2(z, ctx) * (1.0 / (n - 2))
    )


def _div2_cotton_rhs(ctx):
    n = ctx.dim
    return _weyl_cotton_pairing(ctx) * 0.5 - _pair_first(cotton(ctx), _z(ctx), ctx) * (1.0 / (n - 2))


def _counterexample_lhs(ctx):
    return _stack(
        bach_divergence(ctx, 1),
        bach_divergence(ctx, 2),
        cotton_divergence(ctx, 3),
        weyl_complete_divergence(ctx),
    )


def _div4_weyl_rhs(ctx):
    return cotton_divergence(ctx, 3) * _c(ctx.dim)


def _div_ricci_pairing(ctx):
    """``div(C(·,E_i,E_j) z_ij) − ½|C|²``."""
    return divergence(_pair_first(cotton(ctx), _z(ctx), ctx), ctx) - norm2(cotton(ctx), ctx) * 0.5


def _bochner_lhs(ctx):
    return laplacian(ctx, norm2(_z(ctx), ctx)) * 0.5


def _bochner_rhs(ctx):
    z = _z(ctx)
    return -inner(rough_laplacian_z(ctx), z, ctx) + norm2(covariant_derivative(z, ctx), ctx)


def _antisym12(t: TensorValue) -> TensorValue:
    s = "abcd"[: t.valence]
    return t + t.rearrange(s[1] + s[0] + s[2:] + "->" + s)


def _cyclic3(t: TensorValue) -> TensorValue:
    """``t_abc + t_bca + t_cab`` on the first three slots."""
    s = "abcd"[: t.valence]
    rest = s[3:]
    return t + t.rearrange("bca" + rest + "->" + s) + t.rearrange("cab" + rest + "->" + s)


def _curvature_symmetries(t: TensorValue) -> list[TensorValue]:
    return [
        _antisym12(t),
        t + t.rearrange("abdc->abcd"),
        t - t.rearrange("cdab->abcd"),
        _cyclic3(t),
    ]


def _structure(ctx):
    n = ctx.dim
    parts: list[Side] = _curvature_symmetries(riemann(ctx))
    W = weyl(ctx)
    parts += _curvature_symmetries(W) + [contract(W, 0, 2, ctx)]
    r = ricci(ctx)
    parts.append(r - r.rearrange("ba->ab"))
    C = cotton(ctx)
    parts += [_antisym12(C), _cyclic3(C), contract(C, 1, 2, ctx), contract(C, 0, 2, ctx)]
    if n >= 4:
        B = bach(ctx)
        parts += [B - B.rearrange("ba->ab"), contract(B, 0, 1, ctx)]
    if ctx.spec.potential is not None and n >= 3:
        T = tensor_T(static_context(ctx))
        parts += [_antisym12(T), _cyclic3(T), contract(T, 1, 2, ctx), contract(T, 0, 2, ctx)]
    return _stack(*parts)


# ──────────────────────────────────────────────────────────────────────────
# potential identities
# ──────────────────────────────────────────────────────────────────────────
def _fC_plus_T(ctx):
    """``f C + (n−1) T``."""
    return cotton(ctx) * _f(ctx) + tensor_T(static_context(ctx)) * (ctx.dim - 1)


def _one_plus_fC_plus_T(ctx):
    return cotton(ctx) * (_f(ctx) + 1.0) + tensor_T(static_context(ctx)) * (ctx.dim - 1)


def _weyl_gradf(ctx):
    return tilde_i_gradf_W(static_context(ctx))


def _iC_z(ctx):
    """``⟨i_{∇f}C, z⟩``."""
    return product("a,a->", static_context(ctx).grad_f, _pair_first(cotton(ctx), _z(ctx), ctx))


def _div2C_grad(ctx):
    return product("a,a->", static_context(ctx).grad_f, cotton_divergence(ctx, 2))


def _div2C_grad_static(ctx):
    return _f(ctx) * norm2(cotton(ctx), ctx) * 0.5 + _iC_z(ctx)


def _div2C_grad_besse(ctx):
    return (_f(ctx) + 1.0) * norm2(cotton(ctx), ctx) * 0.5 + _iC_z(ctx)


def _div_tilde_W(ctx):
    return divergence(tilde_i_gradf_W(static_context(ctx)), ctx)


def _div_tilde_W_rhs(ctx):
    sctx = static_context(ctx)
    return hat_C(sctx) * _c(ctx.dim) - ring_W(_z(ctx), ctx) * sctx.f


def _T_norm(ctx):
    return norm2(tensor_T(static_context(ctx)), ctx)


def _iT_z(ctx):
    """``⟨i_{∇f}T, z⟩``."""
    sctx = static_context(ctx)
    return product("a,a->", sctx.grad_f, _pair_first(tensor_T(sctx), _z(ctx), ctx))


def _T_norm_inner_rhs(ctx):
    return _iT_z(ctx) * (2.0 / (ctx.dim - 2))


def _T_norm_frame_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    z = _z(ctx)
    bracket = norm2(z, ctx) - norm2(i_N_z(sctx), ctx) * (n / (n - 1))
    return bracket * (2.0 * sctx.grad_norm2 / (n - 2) ** 2)


def _div_fT(ctx):
    sctx = static_context(ctx)
    return divergence(tensor_T(sctx) * sctx.f, ctx)


def _div_fT_grad_grad(ctx):
    grad = static_context(ctx).grad_f
    return product("b,b->", product("ab,a->b", _div_fT(ctx), grad), grad)


def _fT_grad_lhs(ctx):
    sctx = static_context(ctx)
    fB = product("b,b->", product("ab,a->b", bach(ctx), sctx.grad_f), sctx.grad_f) * sctx.f * sctx.f
    return _stack(_div_fT_grad_grad(ctx), fB)


def _fT_grad_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    fT = tensor_T(sctx) * sctx.f
    one_form = product("ac,c->a", product("abc,b->ac", fT, sctx.grad_f), sctx.grad_f)
    first = divergence(one_form, ctx) + _T_norm(ctx) * sctx.f * sctx.f * ((n - 2) / 2)
    second = _div_fT_grad_grad(ctx) * (-(n - 1) / (n - 2))
    return _stack(first, second)


def _fB(ctx):
    return bach(ctx) * _f(ctx) * (ctx.dim - 2)


def _fB_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    return -i_grad(cotton(ctx), sctx) + hat_C(sctx) * _c(n) - _div_T(ctx) * (n - 1)


def _div2_T_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    return (
        _pair_first(cotton(ctx), _z(ctx), ctx) * sctx.f * (1.0 / (n - 2))
        + _pair_first(tensor_T(sctx), _z(ctx), ctx)
    )


def _scaled_div_T(ctx):
    n = ctx.dim
    return _div_T(ctx) * ((n - 1) * (n - 2))


def _div_T_direct_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    f, z, s = sctx.f, _z(ctx), scalar(ctx)
    return (
        z * s * f * (-(n - 2) / (n - 1))
        + _div_z_along_grad(ctx) * (n - 2)
        - hat_C(sctx)
        - zz(z, ctx) * f * n
        + ctx.g * norm2(z, ctx) * f
    )


def _div_T_weyl_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    f, z, s = sctx.f, _z(ctx), scalar(ctx)
    return (
        rough_laplacian_z(ctx) * f * (-(n - 2))
        - zz(z, ctx) * f * n
        + z * s * f * (-(n - 2) / (n - 1))
        + ctx.g * norm2(z, ctx) * f
        + hat_C(sctx) * (n - 3)
        - i_grad(cotton(ctx), sctx) * (n - 2)
        - cotton_divergence(ctx, 1) * f * (2 * (n - 2))
    )


def _ddz_lhs(ctx):
    return rough_laplacian_z(ctx) * _f(ctx) + _div_z_along_grad(ctx)


def _ddz_rhs(ctx):
    sctx = static_context(ctx)
    return hat_C(sctx) - i_grad(cotton(ctx), sctx) - cotton_divergence(ctx, 1) * sctx.f * 2.0


def _div3_T_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    div_b_grad = product("a,a->", sctx.grad_f, bach_divergence(ctx, 1))
    return (
        div_b_grad * (2 * (n - 2) / (n - 4))
        + bach_divergence(ctx, 2) * sctx.f * ((n - 2) / (n - 4))
        + inner(_div_T(ctx), _z(ctx), ctx)
    )


def _div3_T_dim4_rhs(ctx):
    f = _f(ctx)
    return _iC_z(ctx) + inner(_div_T(ctx), _z(ctx), ctx) + _cotton_z_bracket(ctx) * f * 0.5


def _T_C_pairing(ctx):
    return inner(tensor_T(static_context(ctx)), cotton(ctx), ctx)


def _T_C_pairing_rhs(ctx):
    return _iC_z(ctx) * (2.0 / (ctx.dim - 2))


def _level_set_block(t: TensorValue, ctx: PointContext) -> np.ndarray:
    """Components of a 2-tensor on the level set, in a frame ending with ``N``."""
    sctx = static_context(ctx)
    frame = orthonormal_frame(ctx.g.components, sctx.require_normal().components)
    k = ctx.dim - 1
    return frame_components(t, frame, ctx)[:k, :k]


def _iT_level_set(ctx):
    return _level_set_block(i_grad(tensor_T(static_context(ctx)), static_context(ctx)), ctx)


def _iT_level_set_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    sctx.require_normal()
    t = (_z(ctx) + ctx.g * (sctx.alpha / (n - 1))) * (sctx.grad_norm2 / (n - 2))
    return _level_set_block(t, ctx)


def _weyl_normal_lhs(ctx):
    return _iT_z(ctx) * (ctx.dim - 1) + _iC_z(ctx) * _f(ctx)


def _weyl_normal_rhs(ctx):
    sctx = static_context(ctx)
    return inner(W_N(sctx), _z(ctx), ctx) * (-sctx.grad_norm2)


def _div_hat_C(ctx):
    return divergence(hat_C(static_context(ctx)), ctx)


def _div_hat_C_rhs(ctx):
    return _pair_first(cotton(ctx), _z(ctx), ctx) * _f(ctx)


def _div_df_wedge_z(ctx):
    return divergence(wedge_1_2(static_context(ctx).df, _z(ctx)), ctx)


def _div_df_wedge_z_rhs(ctx):
    n = ctx.dim
    z, f = _z(ctx), _f(ctx)
    return _div_z_along_grad(ctx) - zz(z, ctx) * f - z * scalar(ctx) * f * (1.0 / n)


def _div_gradz_wedge_g(ctx):
    sctx = static_context(ctx)
    return divergence(wedge_1_2(i_grad(_z(ctx), sctx), ctx.g), ctx)


def _div_gradz_wedge_g_rhs(ctx):
    n = ctx.dim
    sctx = static_context(ctx)
    z, f = _z(ctx), sctx.f
    return (
        ctx.g * norm2(z, ctx) * f
        - hat_C(sctx)
        - _div_z_along_grad(ctx)
        - zz(z, ctx) * f
        + z * scalar(ctx) * f * (1.0 / (n * (n - 1)))
    )


def _weakly_harmonic(ctx):
    grad = static_context(ctx).grad_f
    dr = dD(ricci(ctx), ctx)
    return product("bc,c->b", product("abc,a->bc", dr, grad), grad)


# ──────────────────────────────────────────────────────────────────────────
# defining equations, as two sides
# ──────────────────────────────────────────────────────────────────────────
def _hess(ctx):
    return hessian(ctx)


def _static_rhs(ctx):
    n = ctx.dim
    return (ricci(ctx) - ctx.g * scalar(ctx) * (1.0 / (n - 1))) * _f(ctx)


def _lap(ctx):
    return laplacian(ctx)


def _eigen_rhs(ctx):
    return scalar(ctx) * _f(ctx) * (-1.0 / (ctx.dim - 1))


def _static_vacuum_lhs(ctx):
    return _stack(ricci(ctx) * _f(ctx), laplacian(ctx), scalar(ctx))


def _static_vacuum_rhs(ctx):
    return _stack(hessian(ctx), np.zeros(1), np.zeros(1))


def _besse_lhs(ctx):
    return s_star_adjoint(static_context(ctx))


def _perfect_fluid_lhs(ctx):
    return vacuum_static_residual(static_context(ctx))


def _perfect_fluid_rhs(ctx):
    sctx = static_context(ctx)
    return vacuum_static_residual(sctx) - perfect_fluid_residual(sctx)


# ──────────────────────────────────────────────────────────────────────────
# registry
# ──────────────────────────────────────────────────────────────────────────
_VS = frozenset({"vacuum-static"})
_BESSE = frozenset({"besse"})


def _checks() -> list[IdentityCheck]:
    return [
        IdentityCheck("div_weyl_cotton", 'div W = (n−3)/(n−2) C, read as div₁W(Y,Z,V) = c C(Z,V,Y)', 3,
                      _div_weyl, _cotton_cycled),
        IdentityCheck("div4W_cotton", "div⁴W = (n−3)/(n−2) div³C", 6,
                      weyl_complete_divergence, _div4_weyl_rhs, min_dim=4),
        IdentityCheck("bach_two_routes", "(n−2) B = div C + W̊r", 4,
                      bach, bach_via_cotton, min_dim=4),
        IdentityCheck("ring_weyl_trace", "W̊r = W̊z", 2,
                      lambda ctx: ring_W(ricci(ctx), ctx), lambda ctx: ring_W(_z(ctx), ctx), min_dim=4),
        IdentityCheck("div_bach", "div B(X) = (n−4)/(n−2)² ⟨i_X C, z⟩", 5,
                      lambda ctx: bach_divergence(ctx, 1), _div_bach_rhs, min_dim=4),
        IdentityCheck("div2_bach", "div²B = (n−4)/(n−2)² (½|C|² + ⟨div C, z⟩)", 6,
                      lambda ctx: bach_divergence(ctx, 2), _div2_bach_rhs, min_dim=4),
        IdentityCheck("div_cotton_formula",
                      "div C = −D*Dz − n/(n−2) z∘z − s/(n−1) z + W̊z + |z|² g/(n−2) (constant s)", 4,
                      lambda ctx: cotton_divergence(ctx, 1), _div_cotton_rhs, constant_scalar=True),
        IdentityCheck("div2_cotton", "div²C(X) = ½⟨ĩ_X W, C⟩ − ⟨i_X C, z⟩/(n−2)", 5,
                      lambda ctx: cotton_divergence(ctx, 2), _div2_cotton_rhs),
        IdentityCheck("divC_z_pointwise", "⟨div C, z⟩ = div(C(·,E_i,E_j) z_ij) − ½|C|²", 4,
                      lambda ctx: inner(cotton_divergence(ctx, 1), _z(ctx), ctx), _div_ricci_pairing),
        IdentityCheck("bochner_z", "½Δ|z|² = −⟨D*Dz, z⟩ + |Dz|²", 4,
                      _bochner_lhs, _bochner_rhs),
        IdentityCheck("counterexample_bach", "div B = div²B = div³C = div⁴W = 0 while B ≠ 0", 6,
                      _counterexample_lhs, _zeros_like(_counterexample_lhs), min_dim=4,
                      tags=frozenset({"product"}), vacuity=False, witness=bach),
        IdentityCheck("symmetry_suite", "curvature symmetries, Cotton/Bach/T symmetries and traces", 4,
                      _structure, _zeros_like(_structure), min_dim=2, vacuity=False),
        # potential
        IdentityCheck("static_fC", "f C + (n−1) T = ĩ_{∇f}W", 3,
                      _fC_plus_T, _weyl_gradf, potential=True, tags=_VS),
        IdentityCheck("div2C_gradf", "div²C(∇f) = ½ f|C|² + ⟨i_{∇f}C, z⟩", 5,
                      _div2C_grad, _div2C_grad_static, potential=True, tags=_VS),
        IdentityCheck("div_tilde_W", "div(ĩ_{∇f}W) = (n−3)/(n−2) Ĉ − f W̊z", 3,
                      _div_tilde_W, _div_tilde_W_rhs, potential=True, tags=_VS),
        IdentityCheck("T_norm_inner", "|T|² = 2/(n−2) ⟨i_{∇f}T, z⟩", 2,
                      _T_norm, _T_norm_inner_rhs, potential=True),
        IdentityCheck("T_norm_frame", "|T|² = 2/(n−2)² |∇f|² (|z|² − n/(n−1) |i_N z|²)", 2,
                      _T_norm, _T_norm_frame_rhs, potential=True, regular_only=True),
        IdentityCheck("T_C_pairing", "⟨T, C⟩ = 2/(n−2) ⟨i_{∇f}C, z⟩", 3,
                      _T_C_pairing, _T_C_pairing_rhs, potential=True),
        IdentityCheck("iT_level_set", "i_{∇f}T = |∇f|²/(n−2) (z + α/(n−1) g) on level sets", 2,
                      _iT_level_set, _iT_level_set_rhs, potential=True, regular_only=True),
        IdentityCheck("weyl_normal_pairing",
                      "(n−1)⟨i_{∇f}T, z⟩ + f⟨i_{∇f}C, z⟩ = −|∇f|² ⟨W_N, z⟩", 3,
                      _weyl_normal_lhs, _weyl_normal_rhs, potential=True, tags=_VS, regular_only=True),
        IdentityCheck("fT_grad_pointwise",
                      "div(fT)(∇f,∇f) = div(fT(·,∇f,∇f)) + (n−2)/2 f²|T|²; "
                      "f²B(∇f,∇f) = −(n−1)/(n−2) div(fT)(∇f,∇f)", 4,
                      _fT_grad_lhs, _fT_grad_rhs, min_dim=4, potential=True, tags=_VS),
        IdentityCheck("fB_formula", "(n−2) f B = −i_{∇f}C + (n−3)/(n−2) Ĉ − (n−1) div T", 4,
                      _fB, _fB_rhs, min_dim=4, potential=True, tags=_VS),
        IdentityCheck("div_hatC", "div Ĉ(X) = f ⟨i_X C, z⟩", 4,
                      _div_hat_C, _div_hat_C_rhs, potential=True, tags=_VS),
        IdentityCheck("div2_T", "div²T(X) = f⟨i_X C, z⟩/(n−2) + ⟨i_X T, z⟩", 4,
                      lambda ctx: _div_T(ctx, 2), _div2_T_rhs, potential=True, tags=_VS),
        IdentityCheck("div_df_wedge_z", "div(df∧z) = D_{∇f}z − f z∘z − s f z/n", 3,
                      _div_df_wedge_z, _div_df_wedge_z_rhs, potential=True, tags=_VS),
        IdentityCheck("div_gradz_wedge_g",
                      "div(i_{∇f}z∧g) = f|z|² g − Ĉ − D_{∇f}z − f z∘z + s f z/(n(n−1))", 3,
                      _div_gradz_wedge_g, _div_gradz_wedge_g_rhs, potential=True, tags=_VS),
        IdentityCheck("div_T_direct",
                      "(n−1)(n−2) div T = −(n−2)/(n−1) sfz + (n−2) D_{∇f}z − Ĉ − nf z∘z + f|z|² g", 3,
                      _scaled_div_T, _div_T_direct_rhs, potential=True, tags=_VS),
        IdentityCheck("div_T_weyl",
                      "(n−1)(n−2) div T = −(n−2) f D*Dz − nf z∘z − (n−2)/(n−1) sfz + f|z|² g"
                      " + (n−3) Ĉ − (n−2) i_{∇f}C − 2(n−2) f div C", 4,
                      _scaled_div_T, _div_T_weyl_rhs, potential=True, tags=_VS),
        IdentityCheck("ddz_identity", "f D*Dz + D_{∇f}z = Ĉ − i_{∇f}C − 2f div C", 4,
                      _ddz_lhs, _ddz_rhs, potential=True, tags=_VS),
        IdentityCheck("div3_T",
                      "div³T = 2(n−2)/(n−4) div B(∇f) + (n−2)/(n−4) f div²B + ⟨div T, z⟩", 6,
                      lambda ctx: _div_T(ctx, 3), _div3_T_rhs, min_dim=5, potential=True, tags=_VS),
        IdentityCheck("div3_T_dim4",
                      "div³T = ⟨i_{∇f}C, z⟩ + ⟨div T, z⟩ + f/2 (½|C|² + ⟨div C, z⟩) in dimension 4", 5,
                      lambda ctx: _div_T(ctx, 3), _div3_T_dim4_rhs, min_dim=4, max_dim=4,
                      potential=True, tags=_VS),
        IdentityCheck("besse_fC", "(1+f) C + (n−1) T = ĩ_{∇f}W", 3,
                      _one_plus_fC_plus_T, _weyl_gradf, potential=True, tags=_BESSE),
        IdentityCheck("besse_div2C", "div²C(∇f) = ½(1+f)|C|² + ⟨i_{∇f}C, z⟩", 5,
                      _div2C_grad, _div2C_grad_besse, potential=True, tags=_BESSE),
        IdentityCheck("weakly_harmonic", "d^D r(∇h, ·, ∇h) = 0", 3,
                      _weakly_harmonic, _zeros_like(_weakly_harmonic), potential=True,
                      tags=frozenset({"static-vacuum"}), vacuity=False),
        # defining equations
        IdentityCheck("vacuum_static_eq", "Ddf = (r − s/(n−1) g) f", 2,
                      _hess, _static_rhs, min_dim=2, potential=True, tags=_VS),
        IdentityCheck("eigen_eq", "Δf = −s f/(n−1)", 2,
                      _lap, _eigen_rhs, min_dim=2, potential=True, tags=_VS),
        IdentityCheck("static_vacuum_eq", "h r = Ddh, Δh = 0, s = 0", 2,
                      _static_vacuum_lhs, _static_vacuum_rhs, min_dim=2, potential=True,
                      tags=frozenset({"static-vacuum"})),
        IdentityCheck("besse_eq", "s′*(f) = z", 2,
                      _besse_lhs, lambda ctx: _z(ctx), min_dim=2, potential=True, tags=_BESSE),
        IdentityCheck("perfect_fluid_eq",
                      "Ddf − (r − s/(n−1) g) f = (s f/(n−1) + Δf) g/n", 2,
                      _perfect_fluid_lhs, _perfect_fluid_rhs, min_dim=2, potential=True, tags=_VS,
                      vacuity=False),
    ]


_REGISTRY: list[IdentityCheck] | None = None


def registry() -> list[IdentityCheck]:
    """Every identity check, ordered by id."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = sorted(_checks(), key=lambda c: c.id)
    return list(_REGISTRY)


def get_check(check_id: str) -> IdentityCheck:
    for check in registry():
        if check.id == check_id:
            return check
    raise KeyError(check_id)
