# ────────────────────────── src/vakrata/catalog.py ──────────────────────────
"""Closed-form manifolds with potentials, expected values and negative controls.

Spheres use stereographic charts ``g = 4/(κ(1+|x|²)²) δ`` with the height
function ``f = (1−|x|²)/(1+|x|²)`` (sup-norm 1); products use block charts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from vakrata.errors import CatalogError
from vakrata.metric import MetricSpec

__all__ = [
    "Expected",
    "NegativeControl",
    "CatalogEntry",
    "CatalogFamily",
    "CATALOG",
    "catalog",
]

TRIVIAL, DERIVED, PUBLISHED = "TRIVIAL", "DERIVED", "PUBLISHED"


@dataclass(frozen=True)
class Expected:
    """One expected value in the Cholesky orthonormal frame.

    ``indices=None`` means every component (the value is then a bound on
    ``max|components|`` that must be met, normally 0).
    """
    quantity: str
    indices: tuple[int, ...] | None
    value: float
    provenance: str
    tolerance: float = 1e-8

    @property
    def label(self) -> str:
        if self.indices is None:
            return f"{self.quantity}[*]"
        return f"{self.quantity}(" + ",".join(f"E{i + 1}" for i in self.indices) + ")"


@dataclass(frozen=True)
class NegativeControl:
    """A wrong potential that must make ``residual`` fail loudly."""
    id: str
    potential: str
    residual: str  # vacuum_static | eigen | static_vacuum | besse
    description: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    spec: MetricSpec
    expected: tuple[Expected, ...] = ()
    negative_controls: tuple[NegativeControl, ...] = ()


@dataclass(frozen=True)
class CatalogFamily:
    builder: Callable[..., CatalogEntry] = field(repr=False)
    defaults: Mapping[str, float]
    description: str
    integer_params: frozenset[str] = frozenset()


# ──────────────────────────────────────────────────────────────────────────
# chart helpers
# ──────────────────────────────────────────────────────────────────────────
def _names(prefix: str, k: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(k)]


def _sumsq(xs: list[str]) -> str:
    return "(" + " + ".join(f"{x}^2" for x in xs) + ")"


def _sphere_factor(xs: list[str], kappa: str) -> str:
    return f"4/({kappa}*(1 + {_sumsq(xs)})^2)"


def _height(xs: list[str]) -> str:
    return f"(1 - {_sumsq(xs)})/(1 + {_sumsq(xs)})"


def _block(components: dict, offset: int, k: int, expr: str) -> None:
    for i in range(offset, offset + k):
        components[(i, i)] = expr


def _zero_all(*quantities: str, provenance: str = TRIVIAL) -> tuple[Expected, ...]:
    return tuple(Expected(q, None, 0.0, provenance) for q in quantities)


# ──────────────────────────────────────────────────────────────────────────
# families
# ──────────────────────────────────────────────────────────────────────────
def flat_torus(n: int = 4) -> CatalogEntry:
    _check(2 <= n <= 6, "flat_torus needs 2 <= n <= 6")
    xs = _names("x", n)
    comps = {(i, i): "1" for i in range(n)}
    spec = MetricSpec.from_strings(
        f"flat_torus(n={n})", xs, comps, potential="1",
        domain=[(-1.0, 1.0)] * n,
        tags=("flat", "einstein", "vacuum-static", "static-vacuum", "besse"),
        description="flat torus chart with constant potential",
    )
    expected = (
        _zero_all("riemann", "scalar", "cotton")
        + (_zero_all("T") if n >= 3 else ())
        + (_zero_all("weyl", "bach") if n >= 4 else ())
    )
    controls = (
        NegativeControl("flat_quadratic_h", "x1^2", "static_vacuum", "h = x1² is not harmonic"),
    )
    return CatalogEntry(spec, expected, controls)


def round_sphere(n: int = 4, kappa: float = 1.0) -> CatalogEntry:
    _check(2 <= n <= 6, "round_sphere needs 2 <= n <= 6")
    _check(kappa > 0, "round_sphere needs kappa > 0")
    xs = _names("x", n)
    comps: dict = {}
    _block(comps, 0, n, _sphere_factor(xs, "kappa"))
    spec = MetricSpec.from_strings(
        f"round_sphere(n={n},kappa={kappa:g})", xs, comps, potential=_height(xs),
        params={"kappa": kappa}, domain=[(-1.2, 1.2)] * n,
        tags=("einstein", "vacuum-static", "besse"),
        description="S^n(κ) in a stereographic chart with the height potential",
    )
    expected = (
        Expected("scalar", (), n * (n - 1) * kappa, DERIVED),
        Expected("ricci", (0, 0), (n - 1) * kappa, DERIVED),
        Expected("riemann", (0, 1, 0, 1), kappa, DERIVED),
    ) + _zero_all("z", "cotton") + (_zero_all("T") if n >= 3 else ()) + (
        _zero_all("weyl", "bach") if n >= 4 else ()
    )
    controls = (
        NegativeControl("sphere_coordinate_f", "x1", "vacuum_static", "f = x1 is not a static potential"),
        NegativeControl("sphere_coordinate_eigen", "x1", "eigen", "f = x1 is not an eigenfunction"),
        NegativeControl("sphere_coordinate_besse", "x1", "besse", "f = x1 does not solve s′*(f) = z"),
    )
    return CatalogEntry(spec, expected, controls)


def hyperbolic(n: int = 4, kappa: float = -1.0) -> CatalogEntry:
    _check(2 <= n <= 6, "hyperbolic needs 2 <= n <= 6")
    _check(kappa < 0, "hyperbolic needs kappa < 0")
    xs = _names("x", n)
    comps: dict = {}
    _block(comps, 0, n, f"4/(c*(1 - {_sumsq(xs)})^2)")
    spec = MetricSpec.from_strings(
        f"hyperbolic(n={n},kappa={kappa:g})", xs, comps,
        potential=f"(1 + {_sumsq(xs)})/(1 - {_sumsq(xs)})",
        params={"c": -kappa}, domain=[(-0.35, 0.35)] * n,
        tags=("einstein", "vacuum-static", "besse"),
        description="H^n(κ) in the Poincaré ball with the cosh potential",
    )
    expected = (
        Expected("scalar", (), n * (n - 1) * kappa, DERIVED),
        Expected("riemann", (0, 1, 0, 1), kappa, DERIVED),
    ) + _zero_all("z", "cotton") + (_zero_all("weyl", "bach") if n >= 4 else ())
    controls = (NegativeControl("hyperbolic_coordinate_f", "x1", "vacuum_static"),)
    return CatalogEntry(spec, expected, controls)


def product_spheres_2n(n: int = 2, a: float = 1.0) -> CatalogEntry:
    """``S^n(2a/(3n²)) × S^n(2a/(3n(n−1)))``; potential on the first factor."""
    _check(2 <= n <= 3, "product_spheres_2n needs 2 <= n <= 3")
    _check(a > 0, "product_spheres_2n needs a > 0")
    xs, ys = _names("x", n), _names("y", n)
    k1, k2 = 2 * a / (3 * n**2), 2 * a / (3 * n * (n - 1))
    comps: dict = {}
    _block(comps, 0, n, _sphere_factor(xs, "k1"))
    _block(comps, n, n, _sphere_factor(ys, "k2"))
    spec = MetricSpec.from_strings(
        f"product_spheres_2n(n={n},a={a:g})", xs + ys, comps, potential=_height(xs),
        params={"k1": k1, "k2": k2}, domain=[(-1.2, 1.2)] * (2 * n),
        tags=("product", "vacuum-static"),
        description="even-dimensional vacuum static product with B ≠ 0 and div²B = div⁴W = 0",
    )
    expected = (
        Expected("scalar", (), 2 * (2 * n - 1) * a / (3 * n), PUBLISHED),
        Expected("ricci", (0, 0), 2 * (n - 1) * a / (3 * n**2), PUBLISHED),
        Expected("ricci", (n, n), 2 * a / (3 * n), PUBLISHED),
        Expected("weyl", (0, 1, 0, 1), a / (3 * n * (n - 1)), PUBLISHED),
        Expected("weyl", (0, n, 0, n), -a / (3 * n**2), PUBLISHED),
        Expected("ringWr", (0, 0), -2 * a**2 / (9 * n**3), PUBLISHED),
        Expected("bach", (0, 0), -(a**2) / (9 * n**3 * (n - 1)), PUBLISHED),
    ) + _zero_all("cotton", provenance=PUBLISHED)
    controls = (
        NegativeControl("product_second_factor_f", _height(ys), "vacuum_static",
                        "the height of the second factor is not static"),
    )
    return CatalogEntry(spec, expected, controls)


def product_spheres_odd(n: int = 2) -> CatalogEntry:
    """``S^n(1) × S^{n+1}(1)``; potential on the first factor."""
    _check(2 <= n <= 3, "product_spheres_odd needs 2 <= n <= 3")
    xs, ys = _names("x", n), _names("y", n + 1)
    comps: dict = {}
    _block(comps, 0, n, _sphere_factor(xs, "1"))
    _block(comps, n, n + 1, _sphere_factor(ys, "1"))
    spec = MetricSpec.from_strings(
        f"product_spheres_odd(n={n})", xs + ys, comps, potential=_height(xs),
        domain=[(-1.2, 1.2)] * (2 * n + 1),
        tags=("product", "vacuum-static"),
        description="odd-dimensional vacuum static product of unit spheres",
    )
    expected = (
        Expected("scalar", (), 2.0 * n**2, PUBLISHED),
        Expected("weyl", (0, 1, 0, 1), (n + 1) / (2 * n - 1), PUBLISHED),
        Expected("weyl", (0, n, 0, n), -(n - 1) / (2 * n - 1), PUBLISHED),
        Expected("bach", (0, 0), -(n**2 - 1) / (2 * n - 1) ** 2, PUBLISHED),
    ) + _zero_all("cotton", provenance=PUBLISHED)
    controls = (
        NegativeControl("odd_second_factor_f", _height(ys), "vacuum_static",
                        "the height of the second factor is not static"),
    )
    return CatalogEntry(spec, expected, controls)


def schwarzschild(m: float = 1.0, dim: int = 3, rho_max: float = 10.0) -> CatalogEntry:
    """Spatial Schwarzschild–Tangherlini slice with lapse ``h``."""
    _check(m > 0, "schwarzschild needs m > 0")
    _check(3 <= dim <= 6, "schwarzschild needs 3 <= dim <= 6")
    horizon = (2 * m) ** (1.0 / (dim - 2))
    rho_min = horizon + 0.5 * m
    _check(rho_max > rho_min, f"schwarzschild needs rho_max > {rho_min:g}")
    ys = _names("y", dim - 1)
    lapse2 = f"(1 - 2*m/rho^{dim - 2})"
    comps: dict = {(0, 0): f"1/{lapse2}"}
    _block(comps, 1, dim - 1, f"rho^2*{_sphere_factor(ys, '1')}")
    spec = MetricSpec.from_strings(
        f"schwarzschild(m={m:g},dim={dim})", ["rho"] + ys, comps, potential=f"sqrt{lapse2}",
        params={"m": m}, domain=[(rho_min, rho_max)] + [(-1.0, 1.0)] * (dim - 1),
        tags=("static-vacuum", "vacuum-static"),
        description="static vacuum slice outside the horizon",
    )
    expected = (Expected("scalar", (), 0.0, DERIVED),) + _zero_all("cotton", "weyl", provenance=DERIVED)
    controls = (
        NegativeControl("schwarzschild_radial_h", "rho", "static_vacuum", "h = ρ is not a static lapse"),
    )
    return CatalogEntry(spec, expected, controls)


def conformal_perturbation(seed: int = 0, eps: float = 0.1, dim: int = 5, potential: int = 0) -> CatalogEntry:
    """``g = δ + ε v vᵀ`` for a seeded quadratic vector field ``v``.

    ``g − δ`` is positive semi-definite everywhere, so ``g`` is a metric
    for every ``ε > 0``.  For ``dim ≥ 4`` it is not conformally flat, so
    ``W``, ``C`` and ``B`` are all non-zero.
    """
    _check(3 <= dim <= 6, "conformal_perturbation needs 3 <= dim <= 6")
    _check(eps > 0, "conformal_perturbation needs eps > 0")
    _check(potential in (0, 1), "conformal_perturbation potential must be 0 or 1")
    xs = _names("x", dim)
    rng = np.random.default_rng(seed)
    monomials = [""] + [
        "*".join(xs[i] for i in combo)
        for degree in (1, 2)
        for combo in itertools.combinations_with_replacement(range(dim), degree)
    ]
    field_ = []
    for _ in range(dim):
        coeffs = rng.uniform(-1.0, 1.0, size=len(monomials))
        terms = [f"{c:.6f}*{m}" if m else f"{c:.6f}" for c, m in zip(coeffs, monomials)]
        field_.append("(" + " + ".join(terms) + ")")
    comps = {}
    for i in range(dim):
        for j in range(i, dim):
            bump = f"eps*{field_[i]}*{field_[j]}"
            comps[(i, j)] = f"1 + {bump}" if i == j else bump
    spec = MetricSpec.from_strings(
        f"conformal_perturbation(seed={seed},eps={eps:g},dim={dim})", xs, comps,
        potential="1 + x1/2" if potential else None,
        params={"eps": eps}, domain=[(-0.5, 0.5)] * dim, tags=("generic",),
        description="seeded rank-one perturbation of flat space",
    )
    controls = ()
    if potential:
        controls = (
            NegativeControl("generic_besse", "1 + x1/2", "besse", "an arbitrary potential on a generic metric"),
        )
    return CatalogEntry(spec, (), controls)


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise CatalogError(message)


CATALOG: dict[str, CatalogFamily] = {
    "flat_torus": CatalogFamily(flat_torus, {"n": 4}, "flat chart, h ≡ 1", frozenset({"n"})),
    "round_sphere": CatalogFamily(round_sphere, {"n": 4, "kappa": 1.0}, "S^n(κ), height potential", frozenset({"n"})),
    "hyperbolic": CatalogFamily(hyperbolic, {"n": 4, "kappa": -1.0}, "H^n(κ), cosh potential", frozenset({"n"})),
    "product_spheres_2n": CatalogFamily(
        product_spheres_2n, {"n": 2, "a": 1.0}, "S^n(a/(kl)) × S^n(a/l), B ≠ 0", frozenset({"n"})
    ),
    "product_spheres_odd": CatalogFamily(product_spheres_odd, {"n": 2}, "S^n × S^(n+1), B ≠ 0", frozenset({"n"})),
    "schwarzschild": CatalogFamily(
        schwarzschild, {"m": 1.0, "dim": 3, "rho_max": 10.0}, "static vacuum slice with lapse h", frozenset({"dim"})
    ),
    "conformal_perturbation": CatalogFamily(
        conformal_perturbation, {"seed": 0, "eps": 0.1, "dim": 5, "potential": 0},
        "generic metric, C ≠ 0 and B ≠ 0", frozenset({"seed", "dim", "potential"}),
    ),
}


def catalog(name: str, params: Mapping[str, float] | None = None) -> CatalogEntry:
    """Build the catalog entry ``name`` with ``params`` overriding the defaults."""
    try:
        family = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}; choose from {', '.join(sorted(CATALOG))}") from None
    kwargs = dict(family.defaults)
    for key, value in (params or {}).items():
        if key not in kwargs:
            raise CatalogError(f"{name} has no parameter {key!r}; parameters: {', '.join(family.defaults)}")
        if key in family.integer_params:
            if not float(value).is_integer():
                raise CatalogError(f"{name}: parameter {key} must be an integer, got {value}")
            value = int(value)
        kwargs[key] = value
    return family.builder(**kwargs)
