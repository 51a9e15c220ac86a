import numpy as np
import pytest

from vakrata.catalog import catalog
from vakrata.curvature import PointContext


@pytest.fixture
def sphere4():
    return catalog("round_sphere", {"n": 4, "kappa": 1.0})


@pytest.fixture
def product4():
    return catalog("product_spheres_2n", {"n": 2, "a": 1.0})


@pytest.fixture
def product_odd():
    return catalog("product_spheres_odd", {"n": 2})


@pytest.fixture
def generic5():
    return catalog("conformal_perturbation", {"seed": 0, "eps": 0.1, "dim": 5, "potential": 1})


@pytest.fixture
def ctx_at():
    """``ctx_at(spec, point, order)`` builds a PointContext."""

    def build(spec, point=None, order=4):
        if point is None:
            point = [0.1 * (i + 1) for i in range(spec.dim)]
        return PointContext.build(spec, np.asarray(point, dtype=float), order)

    return build


@pytest.fixture
def isolated_env(monkeypatch, tmp_path):
    """No VAKRATA_* variables and a private config directory."""
    import os

    for key in list(os.environ):
        if key.startswith("VAKRATA_"):
            monkeypatch.delenv(key)
    monkeypatch.setattr("vakrata.config.CONFIG_DIR", tmp_path / "cfg")
    monkeypatch.setattr("vakrata.config.ENV_FILE", tmp_path / "cfg" / ".env")
    return tmp_path
