"""
Periodized Grids
================
Uniform grids on the torus [0, 2πP)^n standing in for R^n.

Per axis the samples are x_j = j·h with h = 2πP/M and the frequency lattice
is {m/P : m ∈ [−M/2, M/2)}, stored in FFT order (0, 1, …, M/2−1, −M/2, …, −1).
"""

from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.config import get_settings
from core.exceptions import GridError


class GridSpec(BaseModel):
    """Validated grid description. Immutable and hashable."""

    model_config = ConfigDict(frozen=True)

    n: int
    P: int
    M: int

    @property
    def L(self) -> float:
        """Box side 2πP."""
        return 2.0 * np.pi * self.P

    @property
    def h(self) -> float:
        """Grid spacing L/M."""
        return self.L / self.M

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.M,) * self.n

    @property
    def size(self) -> int:
        return self.M ** self.n

    @property
    def cell_volume(self) -> float:
        """h^n, the quadrature weight of one sample."""
        return self.h ** self.n

    @property
    def volume(self) -> float:
        """L^n."""
        return self.L ** self.n

    @property
    def nyquist(self) -> float:
        """Largest |ξ| per axis, M/(2P)."""
        return self.M / (2.0 * self.P)

    def integer_modes(self) -> np.ndarray:
        """Integer mode numbers m per axis, FFT order."""
        return np.fft.fftfreq(self.M, d=1.0 / self.M).round().astype(np.int64)

    def frequencies(self) -> np.ndarray:
        """Frequencies ξ = m/P per axis, FFT order."""
        return self.integer_modes() / self.P

    def nodes(self) -> np.ndarray:
        """Sample positions j·h per axis."""
        return np.arange(self.M) * self.h

    def centered_nodes(self) -> np.ndarray:
        """Sample positions wrapped into [−L/2, L/2), same order as nodes()."""
        x = self.nodes()
        return np.where(x >= self.L / 2.0, x - self.L, x)

    def coordinates(self, centered: bool = False) -> List[np.ndarray]:
        """Broadcastable coordinate arrays, one per axis (ij indexing)."""
        axis = self.centered_nodes() if centered else self.nodes()
        return np.meshgrid(*([axis] * self.n), indexing="ij", sparse=True)

    def frequency_mesh(self) -> List[np.ndarray]:
        """Broadcastable frequency arrays, one per axis."""
        return np.meshgrid(*([self.frequencies()] * self.n), indexing="ij", sparse=True)

    def frequency_norm_squared(self) -> np.ndarray:
        """|ξ|² over the full lattice."""
        total = np.zeros(self.shape)
        for axis in self.frequency_mesh():
            total = total + axis ** 2
        return total

    def mode_index(self, m: int) -> int:
        """Array position of integer mode m along one axis."""
        if not -self.M // 2 <= m < self.M // 2:
            raise GridError(f"mode {m} outside the lattice [{-self.M // 2}, {self.M // 2})")
        return m % self.M

    @property
    def label(self) -> str:
        return f"(n={self.n}, P={self.P}, M={self.M})"

    def __str__(self) -> str:
        return self.label


def make_grid(n: int, P: int, M: int) -> GridSpec:
    """
    Build a validated grid.

    Raises:
        GridError: n outside 1..3, P < 1, M odd or below the minimum,
            or M^n above the configured memory cap
    """
    settings = get_settings()
    if int(n) != n or not 1 <= n <= 3:
        raise GridError(f"dimension must be 1, 2 or 3, got n={n}")
    if int(P) != P or P < 1:
        raise GridError(f"period multiplier must be an integer >= 1, got P={P}")
    if int(M) != M or M % 2 != 0:
        raise GridError(f"odd-M: sample count must be even, got M={M}")
    if M < settings.MIN_SAMPLES:
        raise GridError(f"sample count must be >= {settings.MIN_SAMPLES}, got M={M}")
    if int(M) ** int(n) > settings.MAX_GRID_POINTS:
        raise GridError(
            f"M^n = {int(M) ** int(n)} exceeds the memory cap {settings.MAX_GRID_POINTS}"
        )
    return GridSpec(n=int(n), P=int(P), M=int(M))


def smallest_power_of_two(minimum: int, floor: int = 8) -> int:
    """Smallest power of two that is >= max(minimum, floor)."""
    size = floor
    while size < minimum:
        size *= 2
    return size
