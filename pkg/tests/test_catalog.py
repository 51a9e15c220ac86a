import numpy as np
import pytest

from vakrata.catalog import CATALOG, PUBLISHED, catalog
from vakrata.curvature import PointContext, weyl
from vakrata.errors import CatalogError
from vakrata.residuals import QUANTITIES
from vakrata.static_tensors import bach, cotton


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_every_family_builds_with_defaults(name):
    entry = catalog(name)
    assert entry.spec.dim >= 2
    for item in entry.expected:
        assert item.quantity in QUANTITIES
    for control in entry.negative_controls:
        assert control.residual in {"vacuum_static", "eigen", "static_vacuum", "besse"}


def test_parameters_override_defaults():
    entry = catalog("round_sphere", {"n": 3, "kappa": 2.0})
    assert entry.spec.dim == 3
    scalar = next(e for e in entry.expected if e.quantity == "scalar")
    assert scalar.value == 12.0


def test_product_expected_values():
    entry = catalog("product_spheres_2n", {"n": 2, "a": 1.0})
    values = {e.label: e.value for e in entry.expected}
    assert values["scalar()"] == pytest.approx(1.0)
    assert values["ricci(E1,E1)"] == pytest.approx(1 / 6)
    assert values["ricci(E3,E3)"] == pytest.approx(1 / 3)
    assert values["weyl(E1,E2,E1,E2)"] == pytest.approx(1 / 6)
    assert values["weyl(E1,E3,E1,E3)"] == pytest.approx(-1 / 12)
    assert values["ringWr(E1,E1)"] == pytest.approx(-1 / 36)
    assert values["bach(E1,E1)"] == pytest.approx(-1 / 72)
    assert all(e.provenance == PUBLISHED for e in entry.expected)


def test_odd_product_expected_values():
    values = {e.label: e.value for e in catalog("product_spheres_odd").expected}
    assert values["scalar()"] == pytest.approx(8.0)
    assert values["weyl(E1,E2,E1,E2)"] == pytest.approx(1.0)
    assert values["weyl(E1,E3,E1,E3)"] == pytest.approx(-1 / 3)
    assert 3 * values["bach(E1,E1)"] == pytest.approx(-1.0)


@pytest.mark.parametrize(
    "name, params, message",
    [
        ("klein_bottle", {}, "unknown catalog entry"),
        ("round_sphere", {"radius": 2.0}, "no parameter 'radius'"),
        ("round_sphere", {"n": 2.5}, "must be an integer"),
        ("round_sphere", {"kappa": -1.0}, "kappa > 0"),
        ("hyperbolic", {"kappa": 1.0}, "kappa < 0"),
        ("schwarzschild", {"m": 1.0, "rho_max": 2.0}, "rho_max"),
    ],
)
def test_catalog_errors(name, params, message):
    with pytest.raises(CatalogError, match=message):
        catalog(name, params)


def test_schwarzschild_domain_stays_outside_the_horizon():
    spec = catalog("schwarzschild", {"m": 1.0}).spec
    lo, hi = spec.domain[0]
    assert lo == pytest.approx(2.5)
    assert hi == 10.0
    assert "static-vacuum" in spec.tags


def test_conformal_perturbation_is_seeded():
    a = catalog("conformal_perturbation", {"seed": 1}).spec
    b = catalog("conformal_perturbation", {"seed": 1}).spec
    c = catalog("conformal_perturbation", {"seed": 2}).spec
    point = [0.1, 0.2, -0.1, 0.3, 0.0]
    assert (a.metric_values(point) == b.metric_values(point)).all()
    assert not (a.metric_values(point) == c.metric_values(point)).all()
    assert a.potential is None
    assert catalog("conformal_perturbation", {"potential": 1}).spec.potential is not None


@pytest.mark.parametrize("seed, dim", [(0, 5), (3, 5), (7, 4), (1, 6)])
def test_generic_perturbation_is_not_conformally_flat(seed, dim):
    spec = catalog("conformal_perturbation", {"seed": seed, "dim": dim}).spec
    for p in spec.sample_points(4, seed=seed):
        assert np.linalg.eigvalsh(spec.metric_values(p)).min() >= 1.0 - 1e-12
        ctx = PointContext.build(spec, p, 4)
        assert np.abs(weyl(ctx).components).max() > 1e-3
        assert np.abs(cotton(ctx).components).max() > 1e-3
        assert np.abs(bach(ctx).components).max() > 1e-6
