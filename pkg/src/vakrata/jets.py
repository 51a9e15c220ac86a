# ─────────────────────────── src/vakrata/jets.py ───────────────────────────
"""Truncated multivariate Taylor series ("jets") at a point.

A jet of order K in d variables stores the coefficients ``c_α`` of
``Σ_{|α|≤K} c_α h^α`` in graded-lexicographic order, so the coefficients of
the order-k truncation are a prefix of the array.  Partial derivatives are
recovered as ``∂^α u(p) = α! c_α``.

Products are evaluated through a per-layout table of index pairs
``(α, β)`` with ``|α|+|β| ≤ K`` and a sparse reducer summing each pair into
slot ``α+β``; the tensor layer reuses the same table for jet-valued einsum.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import sparse

from vakrata.errors import ExprDomainError, JetOrderError, JetShapeError, UnknownIdentifierError
from vakrata.expr import ExprNode, NodeKind, pretty

__all__ = [
    "Layout",
    "layout",
    "Jet",
    "lift_coordinate",
    "jet_arith",
    "jet_func",
    "eval_jet",
    "extract_partial",
    "MAX_ORDER",
]

MAX_ORDER = 8


# ──────────────────────────────────────────────────────────────────────────
# coefficient layout
# ──────────────────────────────────────────────────────────────────────────
def _compositions(total: int, dim: int):
    if dim == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(total - head, dim - 1):
            yield (head,) + tail


@dataclass(frozen=True, eq=False)
class Layout:
    """Multi-index bookkeeping for jets of one ``(dim, order)``."""
    dim: int
    order: int
    alphas: np.ndarray = field(repr=False)
    _keys: np.ndarray = field(repr=False)
    _sorter: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.alphas)

    @functools.cached_property
    def totals(self) -> np.ndarray:
        return self.alphas.sum(axis=1)

    @functools.cached_property
    def factorials(self) -> np.ndarray:
        return np.prod([[math.factorial(int(a)) for a in row] for row in self.alphas], axis=1).astype(float)

    def prefix(self, order: int) -> int:
        """Number of coefficients of total degree ``≤ order``."""
        return math.comb(self.dim + order, order)

    def lookup(self, alphas: np.ndarray) -> np.ndarray:
        keys = np.asarray(alphas) @ ((self.order + 1) ** np.arange(self.dim))
        return self._sorter[np.searchsorted(self._keys, keys, sorter=self._sorter)]

    def index(self, alpha: Sequence[int]) -> int:
        alpha = np.asarray(alpha, dtype=int)
        if alpha.shape != (self.dim,) or (alpha < 0).any():
            raise JetShapeError(f"multi-index {tuple(alpha)} does not fit {self.dim} variables")
        if alpha.sum() > self.order:
            raise JetOrderError(f"|α|={alpha.sum()} exceeds jet order {self.order}")
        return int(self.lookup(alpha[None, :])[0])

    @functools.cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(ia, ib, ic)`` with ``alphas[ia] + alphas[ib] == alphas[ic]``."""
        ia, ib, ic = [], [], []
        for a in range(self.size):
            nb = self.prefix(self.order - int(self.totals[a]))
            bs = np.arange(nb)
            ia.append(np.full(nb, a))
            ib.append(bs)
            ic.append(self.lookup(self.alphas[a] + self.alphas[bs]))
        return np.concatenate(ia), np.concatenate(ib), np.concatenate(ic)

    @functools.cached_property
    def reducer(self) -> sparse.csr_matrix:
        _, _, ic = self.pairs
        return sparse.csr_matrix(
            (np.ones(len(ic)), (ic, np.arange(len(ic)))), shape=(self.size, len(ic))
        )

    @functools.lru_cache(maxsize=None)
    def shift(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Source indices and factors for ``∂/∂x_i`` into the order-1 lower layout."""
        target = layout(self.dim, self.order - 1)
        src = target.alphas.copy()
        src[:, i] += 1
        return self.lookup(src), (target.alphas[:, i] + 1).astype(float)


@functools.lru_cache(maxsize=None)
def layout(dim: int, order: int) -> Layout:
    if dim < 1:
        raise JetShapeError(f"jets need at least one variable, got {dim}")
    if not 0 <= order <= MAX_ORDER:
        raise JetOrderError(f"jet order must lie in [0, {MAX_ORDER}], got {order}")
    alphas = np.array([a for k in range(order + 1) for a in _compositions(k, dim)], dtype=int)
    keys = alphas @ ((order + 1) ** np.arange(dim))
    return Layout(dim, order, alphas, keys, np.argsort(keys))


def convolve(a: np.ndarray, b: np.ndarray, lay: Layout) -> np.ndarray:
    ia, ib, _ = lay.pairs
    return lay.reducer @ (a[ia] * b[ib])


# ──────────────────────────────────────────────────────────────────────────
# scalar jets
# ──────────────────────────────────────────────────────────────────────────
def _domain(message: str, func: str, value: float) -> ExprDomainError:
    return ExprDomainError(message, f"{func}({value:.6g})")


@dataclass(frozen=True, eq=False)
class Jet:
    dim: int
    order: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        lay = layout(self.dim, self.order)
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (lay.size,):
            raise JetShapeError(f"expected {lay.size} coefficients for order {self.order}, got {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value: float, dim: int, order: int) -> "Jet":
        c = np.zeros(layout(dim, order).size)
        c[0] = value
        return cls(dim, order, c)

    @property
    def layout(self) -> Layout:
        return layout(self.dim, self.order)

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def _new(self, coeffs: np.ndarray) -> "Jet":
        return Jet(self.dim, self.order, coeffs)

    def _check(self, other: "Jet") -> None:
        if other.dim != self.dim or other.order != self.order:
            raise JetShapeError(
                f"jets disagree: (dim={self.dim}, K={self.order}) vs (dim={other.dim}, K={other.order})"
            )

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order from {self.order} to {order}")
        return Jet(self.dim, order, self.coeffs[: self.layout.prefix(order)])

    def partial(self, i: int) -> "Jet":
        if self.order == 0:
            raise JetOrderError("an order-0 jet has no derivatives")
        src, fac = self.layout.shift(i)
        return Jet(self.dim, self.order - 1, self.coeffs[src] * fac)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Real):
            c = self.coeffs.copy()
            c[0] += other
            return self._new(c)
        self._check(other)
        return self._new(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return self._new(self.coeffs * other)
        self._check(other)
        return self._new(convolve(self.coeffs, other.coeffs, self.layout))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            if other == 0:
                raise _domain("division by zero", "1/", 0.0)
            return self._new(self.coeffs / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            if not other.coeffs[1:].any():
                return self ** other.value
            return (other * self.log()).exp()
        if float(other).is_integer():
            n = int(other)
            if n < 0:
                return self.reciprocal() ** (-n)
            result, base = Jet.constant(1.0, self.dim, self.order), self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if self.value <= 0:
            raise _domain("non-integer power of a non-positive base", "pow", self.value)
        return self.compose(_binomial_series(float(other), self.value, self.order))

    # -- univariate composition ---------------------------------------------
    def compose(self, taylor: Sequence[float]) -> "Jet":
        """``φ∘u`` where ``taylor[k] = φ^(k)(u(p))/k!``; Horner in ``u - u(p)``."""
        h = self - self.value
        result = Jet.constant(taylor[self.order], self.dim, self.order)
        for k in range(self.order - 1, -1, -1):
            result = result * h + taylor[k]
        return result

    def exp(self) -> "Jet":
        e = math.exp(self.value)
        return self.compose([e / math.factorial(k) for k in range(self.order + 1)])

    def log(self) -> "Jet":
        a0 = self.value
        if a0 <= 0:
            raise _domain("log of a non-positive value", "log", a0)
        return self.compose([math.log(a0)] + [(-1) ** (k + 1) / (k * a0**k) for k in range(1, self.order + 1)])

    def sqrt(self) -> "Jet":
        if self.value < 0:
            raise _domain("sqrt of a negative value", "sqrt", self.value)
        if self.value == 0 and self.order > 0:
            raise _domain("sqrt is not smooth at zero", "sqrt", self.value)
        return self ** 0.5

    def reciprocal(self) -> "Jet":
        a0 = self.value
        if a0 == 0:
            raise _domain("division by zero", "1/", a0)
        return self.compose([(-1) ** k / a0 ** (k + 1) for k in range(self.order + 1)])

    def sin(self) -> "Jet":
        return self.compose(_trig_series(self.value, self.order, phase=0))

    def cos(self) -> "Jet":
        return self.compose(_trig_series(self.value, self.order, phase=1))

    def tan(self) -> "Jet":
        return self.sin() / self.cos()


def _binomial_series(r: float, a0: float, order: int) -> list[float]:
    out, b = [], 1.0
    for k in range(order + 1):
        out.append(b * a0 ** (r - k))
        b *= (r - k) / (k + 1)
    return out


def _trig_series(a0: float, order: int, phase: int) -> list[float]:
    cycle = (math.sin(a0), math.cos(a0), -math.sin(a0), -math.cos(a0))
    return [cycle[(k + phase) % 4] / math.factorial(k) for k in range(order + 1)]


# ──────────────────────────────────────────────────────────────────────────
# functional surface
# ──────────────────────────────────────────────────────────────────────────
def lift_coordinate(i: int, point: Sequence[float], order: int) -> Jet:
    """Jet of ``x_i`` at ``point``: value ``point[i]`` and unit first derivative."""
    dim = len(point)
    if not 0 <= i < dim:
        raise JetShapeError(f"coordinate index {i} out of range for dimension {dim}")
    jet = Jet.constant(float(point[i]), dim, order)
    if order > 0:
        e = np.zeros(dim, dtype=int)
        e[i] = 1
        jet.coeffs[jet.layout.index(e)] = 1.0
    return jet


_ARITH: dict[str, Callable[[Jet, Jet], Jet]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": lambda a, b: a ** b,
}


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    if op not in _ARITH:
        raise ValueError(f"unknown jet operator {op!r}")
    return _ARITH[op](a, b)


def jet_func(a: Jet, func: str) -> Jet:
    if func not in ("sin", "cos", "tan", "exp", "log", "sqrt"):
        raise ValueError(f"unknown jet primitive {func!r}")
    return getattr(a, func)()


def eval_jet(
    expr: ExprNode,
    point: Sequence[float],
    order: int,
    params: Mapping[str, float] | None = None,
) -> Jet:
    """Order-``order`` jet of ``expr`` at ``point``.

    Domain errors name the innermost offending subexpression.
    """
    point = np.asarray(point, dtype=float)
    dim = len(point)
    params = params or {}
    coords = [lift_coordinate(i, point, order) for i in range(dim)]

    def ev(node: ExprNode) -> Jet:
        match node.kind:
            case NodeKind.CONST:
                return Jet.constant(node.value, dim, order)
            case NodeKind.COORD:
                if node.index >= dim:
                    raise JetShapeError(f"coordinate {node.name!r} missing from a {dim}-dimensional point")
                return coords[node.index]
            case NodeKind.PARAM:
                if node.name not in params:
                    raise UnknownIdentifierError(node.name)
                return Jet.constant(float(params[node.name]), dim, order)
        args = [ev(c) for c in node.children]
        try:
            if node.kind is NodeKind.UNARY:
                return -args[0]
            if node.kind is NodeKind.BINARY:
                return jet_arith(args[0], args[1], node.name)
            if node.name == "pow":
                return jet_arith(args[0], args[1], "^")
            return jet_func(args[0], node.name)
        except ExprDomainError as exc:
            raise ExprDomainError(exc.message, pretty(node)) from exc
        except OverflowError:
            raise ExprDomainError("overflow", pretty(node)) from None

    return ev(expr)


def extract_partial(jet: Jet, alpha: Sequence[int]) -> float:
    """``∂^α u(p)``."""
    i = jet.layout.index(alpha)
    return float(jet.layout.factorials[i] * jet.coeffs[i])
