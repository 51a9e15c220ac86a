import pytest

from vakrata import config
from vakrata.config import RunConfig, Settings, bootstrap_user_config, load_settings
from vakrata.errors import ConfigError


def test_defaults_without_variables(tmp_path):
    assert load_settings(tmp_path / "missing.env", environ={}) == Settings()


def test_values_from_the_environment():
    settings = load_settings(environ={
        "VAKRATA_POINTS": "20",
        "VAKRATA_SEED": "7",
        "VAKRATA_ORDER": "",
        "VAKRATA_TOLERANCE": "1e-6",
        "VAKRATA_THREADS": "2",
        "VAKRATA_LOG_LEVEL": "info",
    })
    assert settings == Settings(points=20, seed=7, order=None, tolerance=1e-6, threads=2, log_level="INFO")


@pytest.mark.parametrize(
    "key, value",
    [("VAKRATA_POINTS", "many"), ("VAKRATA_TOLERANCE", "tight"), ("VAKRATA_LOG_LEVEL", "chatty")],
)
def test_bad_values(key, value):
    with pytest.raises(ConfigError, match=key):
        load_settings(environ={key: value})


def test_env_file_is_loaded(isolated_env, monkeypatch):
    monkeypatch.setattr("os.environ", {"VAKRATA_SEED": "5"})
    env_file = isolated_env / "custom.env"
    env_file.write_text("VAKRATA_POINTS=12\nVAKRATA_SEED=9\n", encoding="utf-8")
    settings = load_settings(env_file)
    assert settings.points == 12
    assert settings.seed == 5


def test_run_config_validation():
    settings = Settings(points=50, seed=3)
    run = RunConfig.from_settings(settings, "catalog:round_sphere", points=None, order=4)
    assert (run.points, run.seed, run.order) == (50, 3, 4)
    assert RunConfig("x", checks=()).checks == ("*",)
    for bad in ({"points": 0}, {"tolerance": 0.0}, {"order": 9}, {"threads": 0}, {"format": "xml"}):
        with pytest.raises(ConfigError):
            RunConfig("x", **bad)


def test_bootstrap_copies_templates(isolated_env):
    written = bootstrap_user_config()
    assert sorted(p.name for p in written) == [".env", "product_spheres.spec"]
    assert (config.CONFIG_DIR / ".env").read_text(encoding="utf-8").startswith("#")
    assert bootstrap_user_config() == []
    assert len(bootstrap_user_config(overwrite=True)) == 2
