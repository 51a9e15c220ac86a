import logging

import numpy as np
import pytest

from vakrata.catalog import catalog
from vakrata.errors import JetOrderError
from vakrata.residuals import (
    QUANTITIES,
    besse_residual,
    eigen_residual,
    evaluate_quantity,
    perfect_fluid_residual,
    static_vacuum_residual,
    vacuum_static_residual,
)
from vakrata.static_tensors import static_context


def test_sphere_height_is_static_eigen_and_besse(sphere4, ctx_at):
    sctx = static_context(ctx_at(sphere4.spec, order=2))
    assert vacuum_static_residual(sctx).max_abs() < 1e-10
    assert abs(eigen_residual(sctx).value) < 1e-10
    assert besse_residual(sctx).max_abs() < 1e-10
    assert perfect_fluid_residual(sctx).max_abs() < 1e-10


def test_product_potential_is_static(product4, ctx_at):
    sctx = static_context(ctx_at(product4.spec, order=2))
    assert vacuum_static_residual(sctx).max_abs() < 1e-10
    assert abs(eigen_residual(sctx).value) < 1e-10


def test_coordinate_potential_is_not_static(sphere4, ctx_at):
    spec = sphere4.spec.with_potential("x1")
    sctx = static_context(ctx_at(spec, order=2))
    assert vacuum_static_residual(sctx).max_abs() > 1e-2
    assert abs(eigen_residual(sctx).value) > 1e-2


def test_schwarzschild_lapse(ctx_at):
    spec = catalog("schwarzschild", {"m": 1.0}).spec
    res = static_vacuum_residual(static_context(ctx_at(spec, [4.0, 0.2, -0.3], order=2)))
    assert res.tensor.max_abs() < 1e-10
    assert abs(res.laplacian.value) < 1e-10
    assert abs(res.scalar) < 1e-10


def test_static_vacuum_residual_warns_on_curved_scalar(sphere4, ctx_at, caplog):
    with caplog.at_level(logging.WARNING, logger="vakrata.residuals"):
        res = static_vacuum_residual(static_context(ctx_at(sphere4.spec, order=2)))
    assert res.scalar == pytest.approx(12.0)
    assert "scalar curvature" in caplog.text


def test_quantities_table():
    assert {"g", "ricci", "weyl", "cotton", "bach", "T", "hatC", "ringWr", "divB", "div2B", "div4W"} <= set(QUANTITIES)
    assert QUANTITIES["bach"][1] == 4
    assert QUANTITIES["T"][2] is True


def test_evaluate_quantity_checks_the_order(sphere4, ctx_at):
    ctx = ctx_at(sphere4.spec, order=3)
    assert evaluate_quantity("scalar", ctx).value == pytest.approx(12.0)
    np.testing.assert_allclose(evaluate_quantity("cotton", ctx).components, 0.0, atol=1e-10)
    with pytest.raises(JetOrderError, match="bach needs jet order 4"):
        evaluate_quantity("bach", ctx)
