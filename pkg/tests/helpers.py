"""Finite-difference oracles for the jet kernels."""
from typing import Callable

import numpy as np


def richardson_gradient(fn: Callable[[np.ndarray], np.ndarray], point, h: float = 1e-3) -> np.ndarray:
    """``∂_k fn`` stacked on a new first axis; central differences, one Richardson step."""
    point = np.asarray(point, dtype=float)

    def central(k: int, step: float) -> np.ndarray:
        e = np.zeros_like(point)
        e[k] = step
        return (np.asarray(fn(point + e)) - np.asarray(fn(point - e))) / (2 * step)

    return np.stack([(4 * central(k, h / 2) - central(k, h)) / 3 for k in range(len(point))])


def rel_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / (1.0 + float(np.max(np.abs(b))))
