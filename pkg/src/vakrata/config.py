# ────────────────────────── src/vakrata/config.py ───────────────────────────
"""User-level config helpers and run settings."""
from __future__ import annotations

import logging
import os
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from dotenv import load_dotenv

from vakrata.errors import ConfigError
from vakrata.jets import MAX_ORDER

CONFIG_DIR = Path.home() / ".vakrata"
ENV_FILE = CONFIG_DIR / ".env"
PACKAGE_CONFIG = Path(__file__).parent / ".config"

__all__ = [
    "CONFIG_DIR",
    "ENV_FILE",
    "FORMATS",
    "Settings",
    "RunConfig",
    "bootstrap_user_config",
    "load_settings",
]

TEMPLATE_FILES = {
    "env.example": ".env",
    "product_spheres.spec": "product_spheres.spec",
}

FORMATS = ("table", "json")


def bootstrap_user_config(overwrite: bool = False, config_dir: Path | None = None) -> list[Path]:
    """Copy the packaged templates into the user config directory."""
    config_dir = config_dir or CONFIG_DIR
    config_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for src_name, dest_name in TEMPLATE_FILES.items():
        src = PACKAGE_CONFIG / src_name
        dest = config_dir / dest_name
        if dest.exists() and not overwrite:
            continue
        shutil.copy2(src, dest)
        written.append(dest)
    return written


# ──────────────────────────────────────────────────────────────────────────
# settings (.env defaults)
# ──────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Settings:
    points: int = 100
    seed: int = 0
    order: int | None = None
    tolerance: float = 1e-8
    threads: int = 1
    log_level: str = "WARNING"


def _env(environ: Mapping[str, str], key: str, cast, default):
    raw = environ.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(f"{key}={raw!r} is not a valid {cast.__name__}") from None


def load_settings(env_file: Path | None = None, environ: Mapping[str, str] | None = None) -> Settings:
    """Defaults from ``VAKRATA_*`` variables, after loading the user ``.env``.

    Variables already set in the environment win over the file.
    """
    env_file = env_file or ENV_FILE
    if environ is None:
        if env_file.exists():
            load_dotenv(env_file, override=False)
        environ = os.environ
    level = _env(environ, "VAKRATA_LOG_LEVEL", str, "WARNING").upper()
    if level not in logging.getLevelNamesMapping():
        raise ConfigError(f"VAKRATA_LOG_LEVEL={level!r} is not a logging level")
    return Settings(
        points=_env(environ, "VAKRATA_POINTS", int, 100),
        seed=_env(environ, "VAKRATA_SEED", int, 0),
        order=_env(environ, "VAKRATA_ORDER", int, None),
        tolerance=_env(environ, "VAKRATA_TOLERANCE", float, 1e-8),
        threads=_env(environ, "VAKRATA_THREADS", int, 1),
        log_level=level,
    )


# ──────────────────────────────────────────────────────────────────────────
# one run
# ──────────────────────────────────────────────────────────────────────────
@dataclass
class RunConfig:
    source: str
    params: dict[str, float] = field(default_factory=dict)
    checks: tuple[str, ...] = ("*",)
    points: int = 100
    seed: int = 0
    order: int | None = None
    tolerance: float = 1e-8
    format: str = "table"
    output: Path | None = None
    threads: int = 1
    controls: bool = True

    def __post_init__(self):
        if self.points < 1:
            raise ConfigError(f"points must be at least 1, got {self.points}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.order is not None and not 2 <= self.order <= MAX_ORDER:
            raise ConfigError(f"jet order must lie in [2, {MAX_ORDER}], got {self.order}")
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        self.checks = tuple(self.checks) or ("*",)

    @classmethod
    def from_settings(cls, settings: Settings, source: str, **options) -> "RunConfig":
        """Command-line ``options`` (``None`` means unset) over ``settings``."""
        values = {
            "points": settings.points,
            "seed": settings.seed,
            "order": settings.order,
            "tolerance": settings.tolerance,
            "threads": settings.threads,
        }
        values.update({k: v for k, v in options.items() if v is not None})
        return cls(source=source, **values)
