# ────────────────────────── src/vakrata/errors.py ──────────────────────────
"""Exception hierarchy shared by the engine, the harness and the CLI."""
from __future__ import annotations

__all__ = [
    "VakrataError",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "ArityError",
    "ExprDomainError",
    "JetError",
    "JetShapeError",
    "JetOrderError",
    "TensorShapeError",
    "DimensionError",
    "MetricError",
    "MissingPotentialError",
    "CriticalPointError",
    "SpecFileError",
    "CatalogError",
    "ConfigError",
]


class VakrataError(Exception):
    """Base class for every error raised by vakrata."""


# ── expressions ────────────────────────────────────────────────────────────
class ExprError(VakrataError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, text: str, column: int, expected: list[str] | None = None):
        self.text = text
        self.column = column
        self.expected = sorted(expected or [])
        hint = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"syntax error at column {column} in {text!r}{hint}")


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, column: int | None = None):
        self.name = name
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"unknown identifier {name!r}{where}")


class ArityError(ExprError):
    def __init__(self, func: str, expected: int, got: int):
        self.func = func
        super().__init__(f"{func}() takes {expected} argument(s), got {got}")


class ExprDomainError(ExprError):
    def __init__(self, message: str, subexpr: str):
        self.message = message
        self.subexpr = subexpr
        super().__init__(f"{message} in {subexpr}")


# ── jets / tensors ─────────────────────────────────────────────────────────
class JetError(VakrataError):
    pass


class JetShapeError(JetError):
    pass


class JetOrderError(JetError):
    pass


class TensorShapeError(VakrataError):
    pass


class DimensionError(VakrataError):
    """A tensor is only defined above some manifold dimension."""


# ── geometry ───────────────────────────────────────────────────────────────
class MetricError(VakrataError):
    pass


class MissingPotentialError(VakrataError):
    def __init__(self, spec_name: str):
        super().__init__(f"metric {spec_name!r} declares no potential")


class CriticalPointError(VakrataError):
    pass


# ── inputs ─────────────────────────────────────────────────────────────────
class SpecFileError(VakrataError):
    def __init__(self, message: str, path: str | None = None, section: str | None = None, key: str | None = None):
        self.path, self.section, self.key = path, section, key
        where = ":".join(p for p in (path, f"[{section}]" if section else None, key) if p)
        super().__init__(f"{where}: {message}" if where else message)


class CatalogError(VakrataError):
    pass


class ConfigError(VakrataError):
    pass
