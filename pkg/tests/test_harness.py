import numpy as np
import pytest

from vakrata.catalog import catalog
from vakrata.harness import (
    FAIL,
    PASS,
    SKIPPED,
    VACUITY_FLOOR,
    VACUOUS,
    SuiteOptions,
    run_check,
    run_suite,
    select_checks,
)
from vakrata.identities import get_check, registry
from vakrata.metric import MetricSpec


def _by_id(report):
    return {r.check: r for r in report.results}


def test_registry_is_sorted_and_unique():
    ids = [c.id for c in registry()]
    assert ids == sorted(ids)
    assert len(ids) == len(set(ids))
    assert {"div_weyl_cotton", "bach_two_routes", "div_bach", "div2_bach", "div_cotton_formula",
            "div2_cotton", "static_fC", "div3_T", "counterexample_bach"} <= set(ids)
    with pytest.raises(KeyError):
        get_check("no_such_check")


def test_describe_lists_gates():
    described = get_check("div3_T").describe()
    assert described["order"] == 6
    assert "n >= 5" in described["gates"]
    assert "n = 4" in get_check("div3_T_dim4").gates()


def test_select_checks_by_glob():
    ids = {c.id for c in select_checks(["div2_*"])}
    assert ids == {"div2_bach", "div2_cotton", "div2_T"}
    assert select_checks([]) == registry()


def test_skip_reasons(generic5):
    spec = generic5.spec
    assert get_check("div_cotton_formula").skip_reason(spec) == "requires constant scalar curvature"
    assert get_check("static_fC").skip_reason(spec) == "requires tag vacuum-static"
    assert get_check("div3_T_dim4").skip_reason(spec) == "requires dimension <= 4"
    bare = catalog("conformal_perturbation", {"dim": 4}).spec
    assert get_check("T_norm_inner").skip_reason(bare) == "requires a potential"


def test_sphere_equations_expected_values_and_controls(sphere4):
    options = SuiteOptions(points=8, checks=("vacuum_static_eq", "eigen_eq", "besse_eq", "expected_values"))
    report = run_suite(sphere4.spec, options, sphere4)
    assert report.verdict == PASS
    results = _by_id(report)
    assert set(results) == {"vacuum_static_eq", "eigen_eq", "besse_eq"}
    assert all(r.verdict == PASS for r in results.values())
    assert report.expected and all(e.verdict == PASS for e in report.expected)
    scalar = next(e for e in report.expected if e.label == "scalar()")
    assert scalar.observed == pytest.approx(12.0, rel=1e-8)
    assert len(report.controls) == 3
    assert all(c.verdict == PASS and c.ratio >= 1e4 for c in report.controls)


def test_product_counterexample(product4):
    options = SuiteOptions(points=4, checks=("counterexample_bach", "static_fC", "bach_two_routes"))
    report = run_suite(product4.spec, options, product4)
    results = _by_id(report)
    assert report.order == 6
    assert results["counterexample_bach"].verdict == PASS
    assert results["counterexample_bach"].witness > 1e-3
    assert results["static_fC"].verdict == PASS
    assert min(results["static_fC"].max_lhs, results["static_fC"].max_rhs) > 1e-6
    assert results["bach_two_routes"].verdict == PASS
    assert report.expected == []
    assert report.verdict == PASS


def test_generic_metric_checks_are_not_vacuous(generic5):
    checks = ("div_weyl_cotton", "bach_two_routes", "div_bach", "div2_bach", "div2_cotton", "div_cotton_formula")
    report = run_suite(generic5.spec, SuiteOptions(points=3, checks=checks, controls=False))
    results = _by_id(report)
    for check in checks[:-1]:
        assert results[check].verdict == PASS, results[check].reason
        assert min(results[check].max_lhs, results[check].max_rhs) > 1e-12
    assert results["div_cotton_formula"].verdict == SKIPPED
    assert results["div_cotton_formula"].reason == "requires constant scalar curvature"


def test_flat_checks_pass_plainly():
    entry = catalog("flat_torus", {"n": 4})
    report = run_suite(entry.spec, SuiteOptions(points=3, checks=("div_weyl_cotton",)), entry)
    result = _by_id(report)["div_weyl_cotton"]
    assert result.verdict == PASS
    assert max(result.max_lhs, result.max_rhs) <= VACUITY_FLOOR
    assert report.verdict == PASS


def test_conformally_flat_generic_metric_is_vacuous():
    spec = MetricSpec.from_strings(
        "conformally_flat", ["x1", "x2", "x3", "x4"],
        {(i, i): "exp(0.2*(x1*x2 + x3^2 - x4))" for i in range(4)}, tags=["generic"],
    )
    report = run_suite(spec, SuiteOptions(points=3, checks=("div_weyl_cotton", "bach_two_routes")))
    results = _by_id(report)
    assert results["div_weyl_cotton"].verdict == VACUOUS
    assert results["div_weyl_cotton"].reason == "both sides vanish"
    assert results["bach_two_routes"].verdict == VACUOUS
    assert report.verdict == PASS


def test_wrong_potential_fails():
    spec = MetricSpec.from_strings(
        "sphere_with_wrong_potential", ["x1", "x2", "x3"],
        {(i, i): "4/(1 + x1^2 + x2^2 + x3^2)^2" for i in range(3)},
        potential="x1", domain=[(-1.0, 1.0)] * 3, tags=["einstein", "vacuum-static"],
    )
    report = run_suite(spec, SuiteOptions(points=5, checks=("vacuum_static_eq",)))
    result = _by_id(report)["vacuum_static_eq"]
    assert result.verdict == FAIL
    assert "exceeds" in result.reason
    assert report.verdict == FAIL


def test_schwarzschild_static_vacuum():
    entry = catalog("schwarzschild", {"m": 1.0})
    checks = ("static_vacuum_eq", "vacuum_static_eq", "weakly_harmonic", "expected_values")
    report = run_suite(entry.spec, SuiteOptions(points=6, checks=checks), entry)
    assert report.verdict == PASS, [r.reason for r in report.results]
    assert all(c.verdict == PASS for c in report.controls)


def test_order_too_low_skips(sphere4):
    points = sphere4.spec.sample_points(2, seed=0)
    result = run_check(get_check("bach_two_routes"), sphere4.spec, points, order=3)
    assert result.verdict == SKIPPED
    assert "needs jet order 4" in result.reason


def test_regular_only_checks_filter_critical_points(sphere4):
    result = run_check(get_check("T_norm_frame"), sphere4.spec, np.zeros((1, 4)))
    assert result.verdict == SKIPPED
    assert result.filtered == 1
    assert result.reason == "no regular points"


def test_threads_do_not_change_results(product4):
    base = SuiteOptions(points=6, checks=("static_fC", "T_norm_inner"), controls=False)
    one = run_suite(product4.spec, base)
    two = run_suite(product4.spec, SuiteOptions(**{**base.__dict__, "threads": 3}))
    assert [r.to_dict() for r in one.results] == [r.to_dict() for r in two.results]


def test_progress_callback_counts_points(sphere4):
    seen = []
    run_suite(sphere4.spec, SuiteOptions(points=5, checks=("eigen_eq",), controls=False),
              on_point=lambda: seen.append(1))
    assert len(seen) == 5
