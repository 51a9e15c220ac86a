# ─────────────────────────── src/vakrata/utils.py ───────────────────────────
"""Small parsing helpers for the command line – keep lightweight."""

from __future__ import annotations

__all__ = ["expand_path", "parse_param", "parse_params", "parse_point"]


import os
from pathlib import Path
from typing import Iterable


def expand_path(p: str | Path) -> Path:
    """Expand ~ and $VARS inside paths."""
    return Path(os.path.expandvars(str(p))).expanduser()


# ---------------------------------------------------------------------------
def parse_param(text: str) -> tuple[str, float]:
    """``"a=1.5"`` -> ``("a", 1.5)``."""
    key, sep, value = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ValueError(f"expected key=value, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise ValueError(f"parameter {key!r} needs a number, got {value.strip()!r}") from None


def parse_params(items: Iterable[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in items:
        key, value = parse_param(item)
        out[key] = value
    return out


def parse_point(text: str) -> list[float]:
    """``"0.1, -0.2, 0"`` -> ``[0.1, -0.2, 0.0]``."""
    parts = [p.strip() for p in text.split(",")]
    try:
        return [float(p) for p in parts if p]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None
# ---------------------------------------------------------------------------
