import numpy as np
import pytest

from tests.helpers import rel_error, richardson_gradient
from vakrata.curvature import (
    PointContext,
    TensorField,
    christoffel,
    connection_laplacian,
    covariant_derivative,
    differential,
    divergence,
    gradient,
    hessian,
    iterated_divergence,
    laplacian,
    potential,
    ricci,
    riemann,
    scalar,
    traceless_ricci,
    weyl,
)
from vakrata.errors import JetOrderError, MetricError, MissingPotentialError
from vakrata.harness import VACUITY_FLOOR
from vakrata.metric import MetricSpec
from vakrata.tensors import frame_components, orthonormal_frame


def _frame(t, ctx):
    return frame_components(t, orthonormal_frame(ctx.g.components), ctx)


@pytest.mark.parametrize("n, kappa", [(2, 1.0), (3, 2.0), (4, 1.0), (5, 0.5)])
def test_round_sphere_curvature(n, kappa, ctx_at):
    from vakrata.catalog import round_sphere

    spec = round_sphere(n, kappa).spec
    ctx = ctx_at(spec, order=2)
    R = _frame(riemann(ctx), ctx)
    assert R[0, 1, 0, 1] == pytest.approx(kappa, rel=1e-10)
    assert R[0, 1, 1, 0] == pytest.approx(-kappa, rel=1e-10)
    np.testing.assert_allclose(_frame(ricci(ctx), ctx), (n - 1) * kappa * np.eye(n), atol=1e-10)
    assert scalar(ctx).value == pytest.approx(n * (n - 1) * kappa, rel=1e-10)
    assert np.abs(traceless_ricci(ctx).components).max() < 1e-10
    assert np.abs(weyl(ctx).components).max() < 1e-10


def test_hyperbolic_sectional_curvature(ctx_at):
    from vakrata.catalog import hyperbolic

    ctx = ctx_at(hyperbolic(3, -1.0).spec, [0.1, -0.2, 0.05], order=2)
    assert _frame(riemann(ctx), ctx)[1, 2, 1, 2] == pytest.approx(-1.0, rel=1e-10)


def test_weyl_is_trace_free(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=2)
    W = weyl(ctx).components
    assert np.abs(W).max() > 1e3 * VACUITY_FLOOR
    ginv = ctx.ginv.components
    np.testing.assert_allclose(np.einsum("abcd,ac->bd", W, ginv), 0.0, atol=1e-12)


def test_metric_is_parallel(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=3)
    assert np.abs(covariant_derivative(ctx.g, ctx).components).max() < 1e-12
    assert np.abs(connection_laplacian(ctx.g, ctx).components).max() < 1e-12


def test_hessian_is_symmetric_and_traces_to_laplacian(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=3)
    H = hessian(ctx).components
    np.testing.assert_allclose(H, H.T, atol=1e-13)
    assert laplacian(ctx).value == pytest.approx(np.einsum("ab,ab->", H, ctx.ginv.components))


def test_potential_derivatives_default_to_the_spec_potential(sphere4, ctx_at):
    ctx = ctx_at(sphere4.spec, order=3)
    f = potential(ctx)
    np.testing.assert_allclose(differential(ctx).components, differential(ctx, f).components, atol=1e-15)
    np.testing.assert_allclose(gradient(ctx).components, gradient(ctx, f).components, atol=1e-15)
    np.testing.assert_allclose(hessian(ctx).components, hessian(ctx, f).components, atol=1e-14)
    assert laplacian(ctx).value == pytest.approx(laplacian(ctx, f).value, abs=1e-13)


def test_missing_potential(ctx_at):
    from vakrata.catalog import conformal_perturbation

    ctx = ctx_at(conformal_perturbation(dim=3).spec, order=2)
    with pytest.raises(MissingPotentialError):
        hessian(ctx)


def test_context_validation():
    spec = MetricSpec.from_strings("indefinite", ["x", "y"], {(0, 0): "1", (1, 1): "-1"})
    with pytest.raises(MetricError):
        PointContext.build(spec, [0.0, 0.0], 2)
    flat = MetricSpec.from_strings("flat", ["x", "y"], {(0, 0): "1", (1, 1): "1"})
    with pytest.raises(JetOrderError):
        PointContext.build(flat, [0.0, 0.0], 9)


def test_order_budget_is_enforced(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=3)
    W = TensorField("W", 4, 2, weyl)
    assert iterated_divergence(W, 1, ctx).valence == 3
    with pytest.raises(JetOrderError):
        iterated_divergence(W, 2, ctx)


def test_divergence_slots_agree_for_symmetric_tensors(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=3)
    r = ricci(ctx)
    np.testing.assert_allclose(divergence(r, ctx, 0).components, divergence(r, ctx, 1).components, atol=1e-12)


def test_contracted_bianchi(generic5, ctx_at):
    ctx = ctx_at(generic5.spec, order=3)
    div_r = divergence(ricci(ctx), ctx).components
    ds = scalar(ctx).partial().components
    np.testing.assert_allclose(div_r, 0.5 * ds, atol=1e-10)


# ---------------------------------------------------------------------------
# finite-difference oracle on a generic metric
# ---------------------------------------------------------------------------
def _fd_christoffel(spec, p):
    dg = richardson_gradient(spec.metric_values, p)  # dg[k, i, j] = ∂_k g_ij
    ginv = np.linalg.inv(spec.metric_values(p))
    first = 0.5 * (np.einsum("ijk->kij", dg) + np.einsum("jik->kij", dg) - dg)
    return np.einsum("mk,kij->mij", ginv, first)


def _jet_christoffel(spec, p):
    return christoffel(PointContext.build(spec, p, 2)).components


def _fd_riemann(spec, p):
    """``R_abcd = g_ae (∂_c Γ^e_bd − ∂_d Γ^e_bc + Γ^e_cf Γ^f_bd − Γ^e_df Γ^f_bc)``."""
    gam = _jet_christoffel(spec, p)
    dgam = richardson_gradient(lambda q: _jet_christoffel(spec, q), p)  # [c, e, b, d]
    up = (
        np.einsum("cebd->ebcd", dgam)
        - np.einsum("debc->ebcd", dgam)
        + np.einsum("ecf,fbd->ebcd", gam, gam)
        - np.einsum("edf,fbc->ebcd", gam, gam)
    )
    return np.einsum("ae,ebcd->abcd", spec.metric_values(p), up)


def _fd_div_weyl(spec, p):
    gam = _jet_christoffel(spec, p)
    W = weyl(PointContext.build(spec, p, 2)).components
    dW = richardson_gradient(lambda q: weyl(PointContext.build(spec, q, 2)).components, p)
    DW = (
        dW
        - np.einsum("fea,fbcd->eabcd", gam, W)
        - np.einsum("feb,afcd->eabcd", gam, W)
        - np.einsum("fec,abfd->eabcd", gam, W)
        - np.einsum("fed,abcf->eabcd", gam, W)
    )
    return np.einsum("ea,eabcd->bcd", np.linalg.inv(spec.metric_values(p)), DW)


@pytest.fixture(scope="module")
def oracle_points():
    from vakrata.catalog import conformal_perturbation

    spec = conformal_perturbation(seed=3, eps=0.1, dim=5).spec
    points = spec.sample_points(10, seed=11)
    for p in points:
        assert np.abs(weyl(PointContext.build(spec, p, 2)).components).max() > 1e3 * VACUITY_FLOOR
    return spec, points


def test_christoffel_matches_finite_differences(oracle_points):
    spec, points = oracle_points
    for p in points:
        assert rel_error(_jet_christoffel(spec, p), _fd_christoffel(spec, p)) < 1e-4


def test_riemann_matches_finite_differences(oracle_points):
    spec, points = oracle_points
    for p in points:
        jet = riemann(PointContext.build(spec, p, 2)).components
        assert rel_error(jet, _fd_riemann(spec, p)) < 1e-4


def test_div_weyl_matches_finite_differences(oracle_points):
    spec, points = oracle_points
    for p in points:
        ctx = PointContext.build(spec, p, 3)
        assert np.abs(divergence(weyl(ctx), ctx).components).max() > 1e3 * VACUITY_FLOOR
        assert rel_error(divergence(weyl(ctx), ctx).components, _fd_div_weyl(spec, p)) < 1e-4
