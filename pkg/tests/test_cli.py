import json

import pytest
from click.testing import CliRunner

from vakrata.cli import main
from vakrata.config import PACKAGE_CONFIG

WRONG_POTENTIAL = """
[manifold]
name = sphere_wrong_f
coords = u, v

[metric]
g_11 = 4/(1 + u^2 + v^2)^2
g_22 = 4/(1 + u^2 + v^2)^2

[potential]
f = u

[domain]
u = -1, 1
v = -1, 1

[tags]
einstein
vacuum-static
"""


@pytest.fixture(autouse=True)
def _isolated(isolated_env):
    return isolated_env


@pytest.fixture
def runner():
    return CliRunner()


def test_help(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    assert "Vakrata" in result.output
    for command in ("check", "eval", "list", "init"):
        assert command in result.output


def test_init(runner, isolated_env):
    result = runner.invoke(main, ["init"])
    assert result.exit_code == 0
    assert "Configuration initialised at" in result.output
    assert "wrote .env" in result.output
    assert (isolated_env / "cfg" / "product_spheres.spec").exists()


def test_list_catalog(runner):
    result = runner.invoke(main, ["list", "catalog"])
    assert result.exit_code == 0
    assert "round_sphere" in result.output
    assert "product_spheres_2n" in result.output


def test_list_checks_json(runner):
    result = runner.invoke(main, ["list", "checks", "--format", "json"])
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    ids = [r["id"] for r in rows]
    assert "counterexample_bach" in ids
    assert ids == sorted(ids)


def test_list_quantities(runner):
    result = runner.invoke(main, ["list", "quantities"])
    assert result.exit_code == 0
    assert "needs a potential" in result.output


def test_eval_scalar(runner):
    result = runner.invoke(main, ["eval", "catalog:round_sphere", "scalar"])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[-1] == "12"


def test_eval_json_in_an_orthonormal_frame(runner):
    result = runner.invoke(main, ["eval", "catalog:product_spheres_2n", "bach", "--frame", "orthonormal",
                                  "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["order"] == 4
    assert data["point"] == [0.0, 0.0, 0.0, 0.0]
    assert data["components"][0][0] == pytest.approx(-1 / 72, rel=1e-8)
    assert data["components"][2][2] == pytest.approx(1 / 72, rel=1e-8)


def test_eval_weyl_of_the_sphere_vanishes(runner):
    result = runner.invoke(main, ["eval", "catalog:round_sphere", "weyl", "--at", "0.1,0.2,0.3,0.4",
                                  "--format", "json"])
    assert result.exit_code == 0
    comps = json.loads(result.stdout)["components"]
    assert max(abs(x) for a in comps for b in a for c in b for x in c) < 1e-10


@pytest.mark.parametrize(
    "args, message",
    [
        (["eval", "catalog:round_sphere", "curl"], "unknown tensor"),
        (["eval", "catalog:round_sphere", "bach", "--order", "3"], "needs jet order 4"),
        (["eval", "catalog:round_sphere", "scalar", "--at", "0,0"], "has 4 coordinates"),
        (["eval", "catalog:round_sphere", "scalar", "--at", "5,0,0,0"], "outside the domain in x1"),
        (["eval", "catalog:round_sphere", "T", "--frame", "adapted"], "critical point"),
        (["eval", "catalog:conformal_perturbation", "T"], "needs a potential"),
        (["eval", "catalog:klein_bottle", "scalar"], "unknown catalog entry"),
        (["check", "catalog:round_sphere", "--param", "n"], "expected key=value"),
        (["check", "catalog:round_sphere", "--points", "0"], "points must be at least 1"),
    ],
)
def test_bad_input_exits_with_2(runner, args, message):
    result = runner.invoke(main, args)
    assert result.exit_code == 2
    assert message in result.output


def test_broken_spec_file(runner, tmp_path):
    path = tmp_path / "broken.spec"
    path.write_text(WRONG_POTENTIAL.replace("[metric]", "[metrics]"), encoding="utf-8")
    result = runner.invoke(main, ["check", str(path)])
    assert result.exit_code == 2
    assert "missing [metric]" in result.output


def test_bad_environment_value(runner):
    result = runner.invoke(main, ["list", "catalog"], env={"VAKRATA_POINTS": "lots"})
    assert result.exit_code == 2
    assert "VAKRATA_POINTS" in result.output


def test_check_json_passes(runner):
    result = runner.invoke(main, ["check", "catalog:round_sphere", "--points", "4", "--check", "eigen_eq",
                                  "--check", "vacuum_static_eq", "--format", "json"])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data["verdict"] == "pass"
    assert data["points"] == 4
    assert [r["check"] for r in data["results"]] == ["eigen_eq", "vacuum_static_eq"]
    assert all(c["verdict"] == "pass" for c in data["negative_controls"])


def test_check_table_from_the_packaged_spec(runner):
    spec = PACKAGE_CONFIG / "product_spheres.spec"
    result = runner.invoke(main, ["check", f"file:{spec}", "--points", "3", "--check", "static_fC"])
    assert result.exit_code == 0, result.output
    assert "static_fC" in result.stdout
    assert "-> PASS" in result.stdout


def test_static_fC_on_the_product_spheres_is_a_plain_pass(runner):
    result = runner.invoke(main, ["check", "catalog:product_spheres_2n", "--points", "3", "--check", "static_fC",
                                  "--no-controls", "--format", "json"])
    assert result.exit_code == 0, result.output
    (entry,) = json.loads(result.stdout)["results"]
    assert entry["verdict"] == "pass"
    assert entry["reason"] is None
    assert min(entry["max_lhs"], entry["max_rhs"]) > 1e-6


def test_check_failure_exits_with_1(runner, tmp_path):
    path = tmp_path / "wrong.spec"
    path.write_text(WRONG_POTENTIAL, encoding="utf-8")
    result = runner.invoke(main, ["check", str(path), "--points", "5", "--check", "vacuum_static_eq"])
    assert result.exit_code == 1
    assert "-> FAIL" in result.stdout


def test_check_writes_the_report_file(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, ["check", "catalog:round_sphere", "--points", "3", "--check", "eigen_eq",
                                  "--no-controls", "--format", "json", "--output", str(out)])
    assert result.exit_code == 0
    assert "Report written to" in result.stderr
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["negative_controls"] == []
