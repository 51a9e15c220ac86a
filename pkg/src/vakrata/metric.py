# ─────────────────────────── src/vakrata/metric.py ──────────────────────────
"""Metric specifications: closed-form charts, spec files and sample points."""
from __future__ import annotations

import configparser
import dataclasses
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from vakrata.errors import ExprError, MetricError, SpecFileError
from vakrata.expr import ExprNode, NodeKind, bind, eval_scalar, free_parameters, parse, pretty

__all__ = [
    "KNOWN_TAGS",
    "POTENTIAL_TAGS",
    "CONSTANT_SCALAR_TAGS",
    "MetricSpec",
    "parse_spec_text",
    "load_spec_file",
]

log = logging.getLogger(__name__)

KNOWN_TAGS = frozenset(
    {"einstein", "product", "vacuum-static", "static-vacuum", "besse", "generic", "flat", "constant-scalar"}
)
POTENTIAL_TAGS = frozenset({"vacuum-static", "static-vacuum", "besse"})
CONSTANT_SCALAR_TAGS = frozenset({"einstein", "vacuum-static", "static-vacuum", "constant-scalar", "besse", "flat"})

DEFAULT_INTERVAL = (-0.5, 0.5)
SAMPLE_MARGIN = 0.05


@dataclass(frozen=True)
class MetricSpec:
    """(M, g, f) in one chart.

    ``metric`` is the full symmetric matrix of component expressions with
    parameters already bound; ``params`` records the bound values.
    """
    name: str
    coords: tuple[str, ...]
    metric: tuple[tuple[ExprNode, ...], ...]
    potential: ExprNode | None = None
    params: Mapping[str, float] = field(default_factory=dict)
    domain: tuple[tuple[float, float], ...] = ()
    tags: frozenset[str] = frozenset()
    description: str = ""

    def __post_init__(self):
        n = len(self.coords)
        if n < 2:
            raise MetricError(f"{self.name}: a metric needs at least two coordinates")
        if len(set(self.coords)) != n:
            raise MetricError(f"{self.name}: duplicate coordinate names in {self.coords}")
        if len(self.metric) != n or any(len(row) != n for row in self.metric):
            raise MetricError(f"{self.name}: metric matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if self.metric[i][j] != self.metric[j][i]:
                    raise MetricError(f"{self.name}: metric is not symmetric at ({i + 1},{j + 1})")
        unknown = set(self.tags) - KNOWN_TAGS
        if unknown:
            raise MetricError(f"{self.name}: unknown tags {sorted(unknown)}")
        if self.potential is None and set(self.tags) & POTENTIAL_TAGS:
            raise MetricError(f"{self.name}: tags {sorted(set(self.tags) & POTENTIAL_TAGS)} need a potential")
        domain = self.domain or (DEFAULT_INTERVAL,) * n
        if len(domain) != n or any(not lo < hi for lo, hi in domain):
            raise MetricError(f"{self.name}: domain must give one open interval per coordinate")
        object.__setattr__(self, "domain", tuple((float(lo), float(hi)) for lo, hi in domain))
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def constant_scalar(self) -> bool:
        return bool(self.tags & CONSTANT_SCALAR_TAGS)

    # ------------------------------------------------------------------
    @classmethod
    def from_strings(
        cls,
        name: str,
        coords: Sequence[str],
        components: Mapping[tuple[int, int], str],
        potential: str | None = None,
        params: Mapping[str, float] | None = None,
        domain: Sequence[tuple[float, float]] = (),
        tags: Sequence[str] = (),
        description: str = "",
    ) -> "MetricSpec":
        """Build a spec from component strings keyed by 0-based ``(i, j)``.

        One triangle is enough; giving both ``(i, j)`` and ``(j, i)`` with
        different expressions is an error.  Missing off-diagonal entries are 0.
        """
        params = dict(params or {})
        coords = tuple(coords)
        n = len(coords)
        cells: dict[tuple[int, int], ExprNode] = {}
        used: set[str] = set()
        for (i, j), text in components.items():
            if not (0 <= i < n and 0 <= j < n):
                raise MetricError(f"{name}: component ({i + 1},{j + 1}) outside a {n}-dimensional chart")
            parsed = parse(text, coords, params)
            used |= free_parameters(parsed)
            node = bind(parsed, params)
            key = (min(i, j), max(i, j))
            if key in cells and cells[key] != node:
                raise MetricError(f"{name}: g_{i + 1}{j + 1} and g_{j + 1}{i + 1} disagree")
            cells[key] = node
        zero = ExprNode(NodeKind.CONST, value=0.0)
        for i in range(n):
            if (i, i) not in cells:
                raise MetricError(f"{name}: diagonal component g_{i + 1}{i + 1} is missing")
        matrix = tuple(tuple(cells.get((min(i, j), max(i, j)), zero) for j in range(n)) for i in range(n))
        pot = None
        if potential is not None:
            parsed = parse(potential, coords, params)
            used |= free_parameters(parsed)
            pot = bind(parsed, params)
        unused = sorted(set(params) - used)
        if unused:
            log.warning("%s: parameters %s appear in no expression", name, ", ".join(unused))
        return cls(name, coords, matrix, pot, params, tuple(domain), frozenset(tags), description)

    def with_potential(self, text: str | None, name: str | None = None) -> "MetricSpec":
        """Same metric with another potential (used for negative controls)."""
        pot = bind(parse(text, self.coords, self.params), self.params) if text is not None else None
        tags = self.tags if pot is not None else self.tags - POTENTIAL_TAGS
        return dataclasses.replace(self, potential=pot, tags=tags, name=name or self.name)

    # ------------------------------------------------------------------
    def metric_values(self, point: Sequence[float]) -> np.ndarray:
        n = self.dim
        return np.array([[eval_scalar(self.metric[i][j], point) for j in range(n)] for i in range(n)])

    def is_positive_definite(self, point: Sequence[float]) -> bool:
        try:
            np.linalg.cholesky(self.metric_values(point))
        except (np.linalg.LinAlgError, ExprError):
            return False
        return True

    def sample_points(self, count: int, seed: int, margin: float = SAMPLE_MARGIN) -> np.ndarray:
        """Scrambled Halton points in the domain box shrunk by ``margin`` per side."""
        if count < 1:
            raise ValueError("count must be at least 1")
        lo = np.array([a for a, _ in self.domain])
        hi = np.array([b for _, b in self.domain])
        width = hi - lo
        sampler = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        unit = sampler.random(count)
        return qmc.scale(unit, lo + margin * width, hi - margin * width)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "coords": list(self.coords),
            "params": {k: self.params[k] for k in sorted(self.params)},
            "tags": sorted(self.tags),
            "potential": pretty(self.potential) if self.potential is not None else None,
        }


# ──────────────────────────────────────────────────────────────────────────
# spec files
# ──────────────────────────────────────────────────────────────────────────
_COMPONENT = re.compile(r"^g_?(\d)(\d)$|^g_(\d+)_(\d+)$")


def _component_index(key: str) -> tuple[int, int] | None:
    m = _COMPONENT.match(key)
    if not m:
        return None
    a, b = (m.group(1), m.group(2)) if m.group(1) else (m.group(3), m.group(4))
    return int(a) - 1, int(b) - 1


def _float(value: str, source: str, section: str, key: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise SpecFileError(f"expected a number, got {value!r}", source, section, key) from None


def parse_spec_text(text: str, source: str = "<string>", overrides: Mapping[str, float] | None = None) -> MetricSpec:
    """Parse the INI-style spec format documented in ``docs/spec-format.md``."""
    cp = configparser.ConfigParser(allow_no_value=True, interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise SpecFileError(str(exc).splitlines()[0], source) from None

    if not cp.has_section("manifold"):
        raise SpecFileError("missing [manifold] section", source)
    man = cp["manifold"]
    coords = tuple(c.strip() for c in (man.get("coords") or "").split(",") if c.strip())
    if not coords:
        raise SpecFileError("coords must list the coordinate names", source, "manifold", "coords")
    if "dim" in man and int(_float(man["dim"], source, "manifold", "dim")) != len(coords):
        raise SpecFileError(f"dim={man['dim']} but {len(coords)} coordinates given", source, "manifold", "dim")
    name = man.get("name") or Path(source).stem

    params: dict[str, float] = {}
    if cp.has_section("params"):
        for key, value in cp["params"].items():
            params[key] = _float(value, source, "params", key)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise SpecFileError(f"unknown parameter {key!r}", source, "params", key)
        params[key] = float(value)

    if not cp.has_section("metric"):
        raise SpecFileError("missing [metric] section", source)
    components: dict[tuple[int, int], str] = {}
    for key, value in cp["metric"].items():
        idx = _component_index(key)
        if idx is None:
            raise SpecFileError("metric keys look like g_11 or g_1_2", source, "metric", key)
        if not value:
            raise SpecFileError("empty expression", source, "metric", key)
        components[idx] = value

    potential = None
    if cp.has_section("potential"):
        items = list(cp["potential"].items())
        if len(items) != 1 or items[0][0] not in ("f", "h"):
            raise SpecFileError("expected exactly one key, f or h", source, "potential")
        potential = items[0][1]

    domain: list[tuple[float, float]] = []
    if cp.has_section("domain"):
        sec = cp["domain"]
        for c in coords:
            if c not in sec:
                domain.append(DEFAULT_INTERVAL)
                continue
            parts = [p for p in sec[c].split(",")]
            if len(parts) != 2:
                raise SpecFileError("expected 'low, high'", source, "domain", c)
            domain.append((_float(parts[0], source, "domain", c), _float(parts[1], source, "domain", c)))
        extra = set(sec) - set(coords)
        if extra:
            raise SpecFileError(f"unknown coordinates {sorted(extra)}", source, "domain")

    tags = tuple(cp["tags"].keys()) if cp.has_section("tags") else ()

    try:
        return MetricSpec.from_strings(name, coords, components, potential, params, domain, tags)
    except ExprError as exc:
        raise SpecFileError(str(exc), source) from exc
    except MetricError as exc:
        raise SpecFileError(str(exc), source) from exc


def load_spec_file(path: str | Path, overrides: Mapping[str, float] | None = None) -> MetricSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file ({exc.strerror})", str(path)) from None
    spec = parse_spec_text(text, str(path), overrides)
    log.debug("loaded %s from %s", spec.name, path)
    return spec
