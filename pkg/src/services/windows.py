"""
Windows
=======
Partition-of-unity profiles generating the frequency-uniform decomposition.

The n-dimensional window is the tensor product φ(ξ) = Π g(ξ_i) of a
one-dimensional profile g supported in [−1, 1]. Per axis, the window
matrix W[k, m] = g(ξ_m − k) maps coefficients to box weights; it has at
most two nonzeros per column, so it is stored sparse.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional

import numpy as np
import scipy.sparse as sp

from core.exceptions import DecompositionError, ValidationError
from core.grid import GridSpec

WindowKind = Literal["raised-cosine", "sharp"]
WINDOW_KINDS = ("raised-cosine", "sharp")

# □_i(□_{i1}u · □_{i2}v) vanishes once |i − i1 − i2|_∞ exceeds this radius
INTERACTION_RADIUS = 2


def _raised_cosine_step(x: np.ndarray) -> np.ndarray:
    """S(x) = (1 − cos πx)/2."""
    return 0.5 * (1.0 - np.cos(np.pi * x))


@dataclass(frozen=True)
class Window:
    """One-dimensional profile g and its tensor-product window φ."""

    kind: WindowKind

    @property
    def support_radius(self) -> float:
        return 1.0 if self.kind == "raised-cosine" else 0.5

    def profile(self, t: np.ndarray) -> np.ndarray:
        """g(t), vectorized."""
        t = np.asarray(t, dtype=float)
        if self.kind == "sharp":
            return ((t >= -0.5) & (t < 0.5)).astype(float)
        inside = np.abs(t) <= 1.0
        return np.where(inside, _raised_cosine_step(1.0 - np.minimum(np.abs(t), 1.0)), 0.0)

    def phi(self, *xi: np.ndarray) -> np.ndarray:
        """φ(ξ) = Π_i g(ξ_i) for broadcastable per-axis arrays."""
        value = np.ones(())
        for component in xi:
            value = value * self.profile(component)
        return value

    def boxes_touching(self, xi: np.ndarray) -> np.ndarray:
        """
        Integer box indices k with g(ξ − k) possibly nonzero, one column per
        candidate (shape (..., 2) for raised-cosine, (..., 1) for sharp).
        """
        xi = np.asarray(xi, dtype=float)
        if self.kind == "sharp":
            return np.floor(xi + 0.5).astype(np.int64)[..., None]
        base = np.floor(xi).astype(np.int64)
        return np.stack([base, base + 1], axis=-1)


def make_window(kind: str) -> Window:
    """
    Build a window by kind.

    Raises:
        ValidationError: unknown kind
    """
    if kind not in WINDOW_KINDS:
        raise ValidationError("window", f"unknown window kind '{kind}', expected one of {WINDOW_KINDS}")
    return Window(kind=kind)


def default_k_max(grid: GridSpec) -> int:
    """Largest active-box radius with K_max + 1 ≤ M/(2P)."""
    return int(np.floor(grid.nyquist)) - 1


def check_k_max(grid: GridSpec, k_max: Optional[int]) -> int:
    """
    Resolve and validate the active-box radius.

    Raises:
        DecompositionError: K_max + 1 > M/(2P) or K_max < 0
    """
    if k_max is None:
        k_max = default_k_max(grid)
    k_max = int(k_max)
    if k_max < 0:
        raise DecompositionError(f"K_max must be >= 0, got {k_max}")
    if k_max + 1 > grid.nyquist:
        raise DecompositionError(
            f"K_max={k_max} too large for grid {grid}: need K_max + 1 <= M/(2P) = {grid.nyquist:g}"
        )
    return k_max


@lru_cache(maxsize=64)
def axis_window_matrix(grid: GridSpec, window: Window, k_max: int) -> sp.csr_matrix:
    """
    Sparse (2K_max+1) × M matrix with rows k = −K_max..K_max and columns the
    lattice frequencies of one axis in FFT order.
    """
    xi = grid.frequencies()
    candidates = window.boxes_touching(xi)
    columns = np.broadcast_to(np.arange(grid.M)[:, None], candidates.shape)
    values = window.profile(xi[:, None] - candidates)
    keep = (np.abs(candidates) <= k_max) & (values != 0.0)
    matrix = sp.coo_matrix(
        (values[keep], (candidates[keep] + k_max, columns[keep])),
        shape=(2 * k_max + 1, grid.M),
    )
    return matrix.tocsr()


def box_weights(grid: GridSpec, window: Window, k: np.ndarray) -> np.ndarray:
    """φ(ξ − k) over the full lattice for one box index vector k."""
    axes = grid.frequency_mesh()
    return window.phi(*(axis - float(component) for axis, component in zip(axes, k)))


def partition_of_unity_error(grid: GridSpec, window: Window) -> float:
    """max over lattice frequencies of |Σ_k g(ξ − k) − 1|, per axis."""
    xi = grid.frequencies()
    candidates = np.floor(xi)[:, None] + np.arange(-1, 3)[None, :]
    total = window.profile(xi[:, None] - candidates).sum(axis=1)
    return float(np.max(np.abs(total - 1.0)))
