import logging
import textwrap

import numpy as np
import pytest

from vakrata.config import PACKAGE_CONFIG
from vakrata.errors import MetricError, SpecFileError
from vakrata.identities import get_check
from vakrata.metric import MetricSpec, load_spec_file, parse_spec_text

SPHERE = textwrap.dedent(
    """
    [manifold]
    name = sphere2
    dim = 2
    coords = u, v

    [params]
    kappa = 1.0

    [metric]
    g_11 = 4/(kappa*(1 + u^2 + v^2)^2)
    g_22 = 4/(kappa*(1 + u^2 + v^2)^2)

    [potential]
    f = (1 - u^2 - v^2)/(1 + u^2 + v^2)

    [domain]
    u = -1, 1

    [tags]
    einstein
    vacuum-static
    """
)


def test_parse_spec_text():
    spec = parse_spec_text(SPHERE, "sphere.spec")
    assert spec.name == "sphere2"
    assert spec.coords == ("u", "v")
    assert spec.params == {"kappa": 1.0}
    assert spec.domain == ((-1.0, 1.0), (-0.5, 0.5))
    assert spec.tags == frozenset({"einstein", "vacuum-static"})
    assert spec.potential is not None
    assert spec.constant_scalar
    np.testing.assert_allclose(spec.metric_values([0.0, 0.0]), 4 * np.eye(2))


def test_parameter_overrides():
    spec = parse_spec_text(SPHERE, "sphere.spec", {"kappa": 4.0})
    np.testing.assert_allclose(spec.metric_values([0.0, 0.0]), np.eye(2))
    with pytest.raises(SpecFileError, match="unknown parameter"):
        parse_spec_text(SPHERE, "sphere.spec", {"m": 1.0})


@pytest.mark.parametrize(
    "edit, message",
    [
        (lambda t: t.replace("[metric]", "[metrics]"), r"missing \[metric\]"),
        (lambda t: t.replace("g_11 = 4/(", "g_11 = 4/(("), "syntax error"),
        (lambda t: t.replace("u^2 + v^2)^2)\ng_22", "w^2)^2)\ng_22"), "unknown identifier 'w'"),
        (lambda t: t.replace("dim = 2", "dim = 3"), "dim=3"),
        (lambda t: t.replace("g_22", "gxx"), "metric keys"),
        (lambda t: t.replace("u = -1, 1", "u = 1"), "low, high"),
        (lambda t: t.replace("kappa = 1.0", "kappa = one"), "expected a number"),
        (lambda t: t.replace("vacuum-static", "sasakian"), "unknown tags"),
    ],
)
def test_spec_file_errors(edit, message):
    text = edit(SPHERE)
    with pytest.raises(SpecFileError, match=message) as err:
        parse_spec_text(text, "broken.spec")
    assert "broken.spec" in str(err.value)


def test_load_spec_file(tmp_path):
    path = tmp_path / "s.spec"
    path.write_text(SPHERE, encoding="utf-8")
    assert load_spec_file(path).name == "sphere2"
    with pytest.raises(SpecFileError, match="cannot read"):
        load_spec_file(tmp_path / "missing.spec")


def test_packaged_template_loads():
    spec = load_spec_file(PACKAGE_CONFIG / "product_spheres.spec")
    assert spec.dim == 4
    assert spec.potential is not None
    assert "product" in spec.tags


def test_from_strings_validation():
    with pytest.raises(MetricError, match="disagree"):
        MetricSpec.from_strings("bad", ["x", "y"], {(0, 0): "1", (1, 1): "1", (0, 1): "x", (1, 0): "y"})
    with pytest.raises(MetricError, match="missing"):
        MetricSpec.from_strings("bad", ["x", "y"], {(0, 0): "1"})
    with pytest.raises(MetricError, match="need a potential"):
        MetricSpec.from_strings("bad", ["x", "y"], {(0, 0): "1", (1, 1): "1"}, tags=["besse"])
    with pytest.raises(MetricError, match="at least two"):
        MetricSpec.from_strings("bad", ["x"], {(0, 0): "1"})


def test_off_diagonal_components_are_symmetric():
    spec = MetricSpec.from_strings("skew", ["x", "y"], {(0, 0): "2", (1, 1): "2", (1, 0): "x"})
    g = spec.metric_values([0.5, 0.0])
    assert g[0, 1] == g[1, 0] == 0.5
    assert spec.is_positive_definite([0.5, 0.0])
    assert not spec.is_positive_definite([3.0, 0.0])


def test_sample_points_are_seeded_and_inside_the_domain():
    spec = parse_spec_text(SPHERE)
    a = spec.sample_points(50, seed=3)
    assert a.shape == (50, 2)
    np.testing.assert_array_equal(a, spec.sample_points(50, seed=3))
    assert not np.array_equal(a, spec.sample_points(50, seed=4))
    assert (a[:, 0] >= -0.9).all() and (a[:, 0] <= 0.9).all()
    assert (np.abs(a[:, 1]) <= 0.45).all()


def test_with_potential_drops_potential_tags():
    spec = parse_spec_text(SPHERE)
    bare = spec.with_potential(None)
    assert bare.potential is None
    assert "vacuum-static" not in bare.tags
    other = spec.with_potential("u", name="control")
    assert other.name == "control" and other.tags == spec.tags


def test_unused_parameters_are_reported(caplog):
    with caplog.at_level(logging.WARNING, logger="vakrata.metric"):
        spec = MetricSpec.from_strings(
            "scaled", ["x", "y"], {(0, 0): "a", (1, 1): "a"}, potential="b*x", params={"a": 2.0, "b": 1.0, "c": 3.0}
        )
    assert spec.params == {"a": 2.0, "b": 1.0, "c": 3.0}
    assert "scaled: parameters c appear in no expression" in caplog.text


def test_product_tag_alone_does_not_mean_constant_scalar():
    warped = MetricSpec.from_strings(
        "sphere_times_bump", ["x1", "x2", "y1", "y2"],
        {(0, 0): "4/(1 + x1^2 + x2^2)^2", (1, 1): "4/(1 + x1^2 + x2^2)^2",
         (2, 2): "exp(y1^2)", (3, 3): "exp(y1^2)"},
        tags=["product"],
    )
    assert not warped.constant_scalar
    assert get_check("div_cotton_formula").skip_reason(warped) == "requires constant scalar curvature"
    assert MetricSpec.from_strings(
        "sphere_times_plane", ["x1", "x2", "y1", "y2"],
        {(0, 0): "4/(1 + x1^2 + x2^2)^2", (1, 1): "4/(1 + x1^2 + x2^2)^2", (2, 2): "1", (3, 3): "1"},
        tags=["product", "constant-scalar"],
    ).constant_scalar
