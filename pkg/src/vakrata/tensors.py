# ────────────────────────── src/vakrata/tensors.py ─────────────────────────
"""Jet-valued tensors in coordinate components.

A :class:`TensorValue` of valence k stores an array of shape
``(ncoef, n, …, n)``: axis 0 runs over the jet coefficients of the layout
``(n, order)`` and the remaining k axes over coordinate indices.  Every
algebraic operation is a jet-aware einsum (:func:`product`), so derivatives
of products come out right to the order of the least accurate factor.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from numbers import Real
from typing import Protocol, Sequence

import numpy as np

from vakrata.errors import JetOrderError, TensorShapeError
from vakrata.jets import Jet, layout

__all__ = [
    "CO",
    "CONTRA",
    "TensorValue",
    "MetricLike",
    "product",
    "contract",
    "raise_slot",
    "lower_slot",
    "inner",
    "norm2",
    "interior_first",
    "interior_last",
    "kulkarni_nomizu",
    "wedge_1_2",
    "zz",
    "ring",
    "orthonormal_frame",
    "frame_components",
]

CO, CONTRA = "co", "contra"

# einsum letters free for tensor slots; Z is the jet axis, y/z are scratch
_SLOTS = "".join(c for c in string.ascii_lowercase if c not in "yz")


def letters(k: int) -> str:
    if k > len(_SLOTS):
        raise TensorShapeError(f"valence {k} is too large")
    return _SLOTS[:k]


@dataclass(frozen=True, eq=False)
class TensorValue:
    dim: int
    order: int
    coeffs: np.ndarray = field(repr=False)
    variance: tuple[str, ...] = ()

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        k = coeffs.ndim - 1
        lay = layout(self.dim, self.order)
        if coeffs.shape != (lay.size,) + (self.dim,) * k:
            raise TensorShapeError(
                f"coefficient array {coeffs.shape} does not match dim={self.dim}, order={self.order}"
            )
        variance = tuple(self.variance) if self.variance else (CO,) * k
        if len(variance) != k or any(v not in (CO, CONTRA) for v in variance):
            raise TensorShapeError(f"variance {variance!r} does not match valence {k}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "variance", variance)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, dim: int, order: int, variance: Sequence[str]) -> "TensorValue":
        shape = (layout(dim, order).size,) + (dim,) * len(variance)
        return cls(dim, order, np.zeros(shape), tuple(variance))

    @classmethod
    def constant(cls, components, order: int, variance: Sequence[str] | None = None) -> "TensorValue":
        """Covariantly constant components (all derivative coefficients zero)."""
        components = np.asarray(components, dtype=float)
        dim = components.shape[0] if components.ndim else None
        if dim is None:
            raise TensorShapeError("use from_jet for scalars")
        coeffs = np.zeros((layout(dim, order).size,) + components.shape)
        coeffs[0] = components
        return cls(dim, order, coeffs, tuple(variance or (CO,) * components.ndim))

    @classmethod
    def from_jet(cls, jet: Jet) -> "TensorValue":
        return cls(jet.dim, jet.order, jet.coeffs)

    @classmethod
    def scalar(cls, value: float, dim: int, order: int) -> "TensorValue":
        return cls.from_jet(Jet.constant(value, dim, order))

    # -- views --------------------------------------------------------------
    @property
    def valence(self) -> int:
        return len(self.variance)

    @property
    def components(self) -> np.ndarray:
        """Component values at the base point."""
        return self.coeffs[0]

    @property
    def value(self) -> float:
        if self.valence:
            raise TensorShapeError("value is only defined for scalars")
        return float(self.coeffs[0])

    def to_jet(self) -> Jet:
        if self.valence:
            raise TensorShapeError("only scalars convert to jets")
        return Jet(self.dim, self.order, self.coeffs)

    def truncate(self, order: int) -> "TensorValue":
        if order == self.order:
            return self
        if order > self.order:
            raise JetOrderError(f"cannot raise tensor order from {self.order} to {order}")
        n = layout(self.dim, self.order).prefix(order)
        return TensorValue(self.dim, order, self.coeffs[:n], self.variance)

    def partial(self) -> "TensorValue":
        """Coordinate derivative ``∂_v T``; the new covariant slot comes first."""
        if self.order == 0:
            raise JetOrderError("an order-0 tensor has no derivatives")
        lay = layout(self.dim, self.order)
        parts = []
        for i in range(self.dim):
            src, fac = lay.shift(i)
            parts.append(self.coeffs[src] * fac.reshape((-1,) + (1,) * self.valence))
        return TensorValue(self.dim, self.order - 1, np.stack(parts, axis=1), (CO,) + self.variance)

    def rearrange(self, spec: str) -> "TensorValue":
        """Permute slots, e.g. ``"abc->bca"``."""
        src, dst = spec.split("->")
        if sorted(src) != sorted(dst) or len(src) != self.valence:
            raise TensorShapeError(f"bad slot permutation {spec!r} for valence {self.valence}")
        coeffs = np.einsum(f"Z{src}->Z{dst}", self.coeffs)
        variance = tuple(self.variance[src.index(c)] for c in dst)
        return TensorValue(self.dim, self.order, coeffs, variance)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.components))) if self.valence else abs(self.value)

    # -- linear algebra -----------------------------------------------------
    def _aligned(self, other: "TensorValue") -> tuple[np.ndarray, np.ndarray, int]:
        if not isinstance(other, TensorValue):
            raise TypeError(f"cannot combine a tensor with {type(other).__name__}")
        if other.dim != self.dim:
            raise TensorShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.variance != self.variance:
            raise TensorShapeError(f"variance mismatch: {self.variance} vs {other.variance}")
        order = min(self.order, other.order)
        return self.truncate(order).coeffs, other.truncate(order).coeffs, order

    def __add__(self, other):
        if isinstance(other, Real) and other == 0:
            return self
        if isinstance(other, Real) and not self.valence:
            c = self.coeffs.copy()
            c[0] += other
            return TensorValue(self.dim, self.order, c)
        a, b, order = self._aligned(other)
        return TensorValue(self.dim, order, a + b, self.variance)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TensorValue(self.dim, self.order, -self.coeffs, self.variance)

    def __mul__(self, other):
        if isinstance(other, Real):
            return TensorValue(self.dim, self.order, self.coeffs * other, self.variance)
        if isinstance(other, Jet):
            other = TensorValue.from_jet(other)
        if isinstance(other, TensorValue):
            if other.valence == 0:
                s = letters(self.valence)
                return product(f"{s},->{s}", self, other)
            if self.valence == 0:
                s = letters(other.valence)
                return product(f",{s}->{s}", self, other)
            raise TensorShapeError("use product() for tensor-by-tensor products")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self * (1.0 / other)
        if isinstance(other, TensorValue):
            return self * TensorValue.from_jet(other.to_jet().reciprocal())
        return NotImplemented


def _variance_of(ch: str, sa: str, a: TensorValue, sb: str, b: TensorValue) -> str:
    if ch in sa:
        return a.variance[sa.index(ch)]
    if ch in sb:
        return b.variance[sb.index(ch)]
    raise TensorShapeError(f"output index {ch!r} appears in no operand")


def product(subscripts: str, a: TensorValue, b: TensorValue, order: int | None = None) -> TensorValue:
    """Jet-aware ``einsum`` of two tensors.

    ``subscripts`` uses plain einsum syntax without the jet axis, e.g.
    ``"ab,bc->ac"``.  The result has the smaller of the two jet orders, or
    ``order`` when that is lower still.
    """
    if a.dim != b.dim:
        raise TensorShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    ins, out = subscripts.replace(" ", "").split("->")
    sa, sb = ins.split(",")
    if len(sa) != a.valence or len(sb) != b.valence:
        raise TensorShapeError(f"subscripts {subscripts!r} do not match valences {a.valence}, {b.valence}")
    order = min(a.order, b.order) if order is None else min(a.order, b.order, order)
    lay = layout(a.dim, order)
    ia, ib, _ = lay.pairs
    A = a.truncate(order).coeffs[ia]
    B = b.truncate(order).coeffs[ib]
    X = np.einsum(f"Z{sa},Z{sb}->Z{out}", A, B, optimize=True)
    coeffs = np.asarray(lay.reducer @ X.reshape(len(ia), -1)).reshape((lay.size,) + X.shape[1:])
    variance = tuple(_variance_of(c, sa, a, sb, b) for c in out)
    return TensorValue(a.dim, order, coeffs, variance)


# ──────────────────────────────────────────────────────────────────────────
# metric operations
# ──────────────────────────────────────────────────────────────────────────
class MetricLike(Protocol):
    g: TensorValue
    ginv: TensorValue


def _swap(s: str, i: int, c: str) -> str:
    return s[:i] + c + s[i + 1:]


def raise_slot(t: TensorValue, slot: int, metric: MetricLike) -> TensorValue:
    if t.variance[slot] == CONTRA:
        return t
    s = letters(t.valence)
    return product(f"{_swap(s, slot, 'y')},y{s[slot]}->{s}", t, metric.ginv)


def lower_slot(t: TensorValue, slot: int, metric: MetricLike) -> TensorValue:
    if t.variance[slot] == CO:
        return t
    s = letters(t.valence)
    return product(f"{_swap(s, slot, 'y')},y{s[slot]}->{s}", t, metric.g)


def _trace(t: TensorValue, a: int, b: int) -> TensorValue:
    coeffs = np.trace(t.coeffs, axis1=a + 1, axis2=b + 1)
    variance = tuple(v for i, v in enumerate(t.variance) if i not in (a, b))
    return TensorValue(t.dim, t.order, coeffs, variance)


def contract(t: TensorValue, a: int, b: int, metric: MetricLike) -> TensorValue:
    """Metric trace over slots ``a`` and ``b``."""
    if a == b or not (0 <= a < t.valence and 0 <= b < t.valence):
        raise TensorShapeError(f"cannot contract slots {a}, {b} of a valence-{t.valence} tensor")
    va, vb = t.variance[a], t.variance[b]
    if va == vb == CO:
        t = raise_slot(t, b, metric)
    elif va == vb == CONTRA:
        t = lower_slot(t, b, metric)
    return _trace(t, a, b)


def covariant(t: TensorValue, metric: MetricLike) -> TensorValue:
    for i in range(t.valence):
        t = lower_slot(t, i, metric)
    return t


def inner(a: TensorValue, b: TensorValue, metric: MetricLike) -> TensorValue:
    """Full metric contraction ``⟨a, b⟩`` as a scalar jet."""
    if a.valence != b.valence:
        raise TensorShapeError(f"valence mismatch: {a.valence} vs {b.valence}")
    a = covariant(a, metric)
    b = covariant(b, metric)
    for i in range(b.valence):
        b = raise_slot(b, i, metric)
    s = letters(a.valence)
    return product(f"{s},{s}->", a, b)


def norm2(t: TensorValue, metric: MetricLike) -> TensorValue:
    return inner(t, t, metric)


def interior_first(v: TensorValue, t: TensorValue, metric: MetricLike) -> TensorValue:
    """``i_v t``: insert ``v`` into the first slot."""
    v = raise_slot(v, 0, metric)
    s = letters(t.valence)
    return product(f"{s[0]},{s}->{s[1:]}", v, covariant(t, metric))


def interior_last(v: TensorValue, t: TensorValue, metric: MetricLike) -> TensorValue:
    """``ĩ_v t``: insert ``v`` into the last slot."""
    v = raise_slot(v, 0, metric)
    s = letters(t.valence)
    return product(f"{s[-1]},{s}->{s[:-1]}", v, covariant(t, metric))


def kulkarni_nomizu(h: TensorValue, k: TensorValue) -> TensorValue:
    """``(h∧k)_{abcd} = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad``."""
    if h.valence != 2 or k.valence != 2:
        raise TensorShapeError("Kulkarni–Nomizu product takes two 2-tensors")
    return (
        product("ac,bd->abcd", h, k)
        + product("bd,ac->abcd", h, k)
        - product("ad,bc->abcd", h, k)
        - product("bc,ad->abcd", h, k)
    )


def wedge_1_2(phi: TensorValue, eta: TensorValue) -> TensorValue:
    """``(φ∧η)(X,Y,Z) = φ(X)η(Y,Z) - φ(Y)η(X,Z)``."""
    if phi.valence != 1 or eta.valence != 2:
        raise TensorShapeError("wedge_1_2 takes a 1-form and a 2-tensor")
    return product("a,bc->abc", phi, eta) - product("b,ac->abc", phi, eta)


def zz(z: TensorValue, metric: MetricLike) -> TensorValue:
    """``(z∘z)_ij = z_ia z_j^a``."""
    return product("ia,ja->ij", raise_slot(z, 1, metric), z)


def ring(t4: TensorValue, h: TensorValue, metric: MetricLike) -> TensorValue:
    """``(T̊h)(X,Y) = T(X, e_i, Y, e_j) h(e_i, e_j)``."""
    if t4.valence != 4 or h.valence != 2:
        raise TensorShapeError("ring takes a 4-tensor and a 2-tensor")
    hr = raise_slot(raise_slot(h, 0, metric), 1, metric)
    return product("aibj,ij->ab", covariant(t4, metric), hr)


# ──────────────────────────────────────────────────────────────────────────
# orthonormal frames (values only)
# ──────────────────────────────────────────────────────────────────────────
def orthonormal_frame(g: np.ndarray, last: np.ndarray | None = None) -> np.ndarray:
    """Columns form a g-orthonormal frame.

    With ``last`` (a vector) the frame is adapted: its final column is
    ``last/|last|`` and the others span the orthogonal complement.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if last is None:
        return np.linalg.inv(np.linalg.cholesky(g)).T
    basis = [np.asarray(last, dtype=float)] + [np.eye(n)[i] for i in range(n)]
    frame: list[np.ndarray] = []
    for v in basis:
        for e in frame:
            v = v - (e @ g @ v) * e
        nv = float(v @ g @ v)
        if nv > 1e-12:
            frame.append(v / np.sqrt(nv))
        if len(frame) == n:
            break
    return np.column_stack(frame[1:] + frame[:1])


def frame_components(t: TensorValue, frame: np.ndarray, metric: MetricLike) -> np.ndarray:
    """Components ``T(E_i, E_j, …)`` of the covariant form of ``t``."""
    comps = covariant(t, metric).components
    for _ in range(t.valence):
        comps = np.tensordot(comps, frame, axes=([0], [0]))
    return comps
