"""
Modulation Service
==================
Frequency-uniform decomposition, modulation norms and the σ(s,q) calculus.

    ‖f‖_{M^s_{p,q}} = (Σ_{|k|_∞ ≤ K_max} ⟨k⟩^{sq} ‖□_k f‖_p^q)^{1/q},   ⟨k⟩ = √(1+|k|²)

For p = 2 the box norms come from Parseval, ‖□_k f‖₂² = L^n Σ_m φ_k(ξ_m)² |c_m|²,
evaluated separably with the per-axis window matrices. Other p reconstruct
each occupied box and integrate by quadrature.
"""

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import get_settings
from core.exceptions import DecompositionError, ValidationError
from core.field import (
    Field,
    Operand,
    SpectralField,
    check_same_grid,
    fft_inverse,
    lattice_box_mask,
    lp_norm,
    to_spectral,
)
from core.grid import GridSpec
from core.metrics import track_performance
from schemas.configs import ModulationParams, sigma_value
from services.dealias import multiply_dealiased
from services.windows import (
    Window,
    axis_window_matrix,
    box_weights,
    check_k_max,
    make_window,
)

BoxIndex = Tuple[int, ...]

# boxes whose energy is below this fraction of the peak are treated as empty
EMPTY_BOX_FRACTION = 1e-30


def resolve_window(window: Union[Window, str, None]) -> Window:
    if isinstance(window, Window):
        return window
    return make_window(window or get_settings().WINDOW)


def _apply_per_axis(matrix, values: np.ndarray) -> np.ndarray:
    """Contract every axis of `values` with the same sparse matrix."""
    for axis in range(values.ndim):
        moved = np.moveaxis(values, axis, 0)
        shape = moved.shape
        contracted = matrix @ moved.reshape(shape[0], -1)
        values = np.moveaxis(np.asarray(contracted).reshape((matrix.shape[0],) + shape[1:]), 0, axis)
    return values


def box_indices(k_max: int) -> np.ndarray:
    """Per-axis box index vector −K_max..K_max (array position = k + K_max)."""
    return np.arange(-k_max, k_max + 1)


def bracket(n: int, k_max: int) -> np.ndarray:
    """⟨k⟩ = √(1+|k|²) over the box lattice, shape (2K_max+1,)^n."""
    axes = np.meshgrid(*([box_indices(k_max).astype(float)] * n), indexing="ij", sparse=True)
    total = np.ones(())
    for axis in axes:
        total = total + axis ** 2
    return np.sqrt(np.broadcast_to(total, (2 * k_max + 1,) * n))


def box_energies(value: Operand, window: Union[Window, str, None] = None, k_max: Optional[int] = None) -> np.ndarray:
    """‖□_k f‖₂² for every active box, shape (2K_max+1,)^n."""
    spectrum = to_spectral(value)
    grid = spectrum.grid
    window = resolve_window(window)
    k_max = check_k_max(grid, k_max)
    matrix = axis_window_matrix(grid, window, k_max)
    squared = matrix.multiply(matrix).tocsr()
    energies = _apply_per_axis(squared, np.abs(spectrum.coeffs) ** 2)
    return grid.volume * np.maximum(energies, 0.0)


def box_coefficients(spectrum: SpectralField, k: Sequence[int], window: Window) -> SpectralField:
    """Coefficients of □_k f: φ(ξ − k) c."""
    return spectrum.multiply(box_weights(spectrum.grid, window, np.asarray(k)))


def box_norms(
    value: Operand,
    p: float,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> np.ndarray:
    """‖□_k f‖_p for every active box, shape (2K_max+1,)^n."""
    if np.isnan(p) or p < 1.0:
        raise ValidationError("p", f"exponent must lie in [1, inf], got {p}")
    window = resolve_window(window)
    spectrum = to_spectral(value)
    k_max = check_k_max(spectrum.grid, k_max)
    energies = box_energies(spectrum, window, k_max)
    if p == 2.0:
        return np.sqrt(energies)

    norms = np.zeros_like(energies)
    peak = energies.max() if energies.size else 0.0
    if peak == 0.0:
        return norms
    offsets = box_indices(k_max)
    for position in zip(*np.nonzero(energies > EMPTY_BOX_FRACTION * peak)):
        k = tuple(int(offsets[i]) for i in position)
        piece = fft_inverse(box_coefficients(spectrum, k, window))
        norms[position] = lp_norm(piece, p)
    return norms


def combine_lq(values: np.ndarray, q: float) -> float:
    """ℓ^q norm of a nonnegative array (max for q = ∞)."""
    values = np.asarray(values, dtype=float).ravel()
    peak = float(values.max()) if values.size else 0.0
    if peak == 0.0 or not np.isfinite(peak):
        return peak
    if np.isinf(q):
        return peak
    return peak * float(np.sum((values / peak) ** q) ** (1.0 / q))


def weighted_box_norms(
    value: Operand,
    mp: ModulationParams,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> np.ndarray:
    """⟨k⟩^s ‖□_k f‖_p over the active boxes."""
    spectrum = to_spectral(value)
    if mp.n != spectrum.grid.n:
        raise ValidationError("n", f"parameters are for n={mp.n}, field lives on {spectrum.grid}")
    k_max = check_k_max(spectrum.grid, k_max)
    norms = box_norms(spectrum, mp.p, window, k_max)
    return bracket(spectrum.grid.n, k_max) ** mp.s * norms


@track_performance("modulation_norm")
def modulation_norm(
    value: Operand,
    mp: ModulationParams,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> float:
    """‖f‖_{M^s_{p,q}} truncated to |k|_∞ ≤ K_max."""
    return combine_lq(weighted_box_norms(value, mp, window, k_max), mp.q)


def restricted_modulation_norm(
    value: Operand,
    mp: ModulationParams,
    center: Sequence[int],
    radius: int,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> float:
    """Modulation norm restricted to boxes with |k − center|_∞ ≤ radius."""
    spectrum = to_spectral(value)
    k_max = check_k_max(spectrum.grid, k_max)
    weighted = weighted_box_norms(spectrum, mp, window, k_max)
    axes = np.meshgrid(*([box_indices(k_max)] * mp.n), indexing="ij", sparse=True)
    mask = np.ones(weighted.shape, dtype=bool)
    for axis, c in zip(axes, center):
        mask = mask & (np.abs(axis - int(c)) <= radius)
    return combine_lq(weighted[mask], mp.q)


@dataclass
class BoxEntry:
    """One row of a norm breakdown."""
    k: BoxIndex
    box_norm: float
    weighted: float


@dataclass
class NormBreakdown:
    """Norm, per-box contributions and the spectral tail outside the reconstructed band."""
    value: float
    params: ModulationParams
    window: str
    k_max: int
    tail_mass: float
    boxes: List[BoxEntry] = field(default_factory=list)

    def q_power_sum(self) -> float:
        """Σ_k (⟨k⟩^s ‖□_k f‖_p)^q over the listed boxes."""
        return float(sum(entry.weighted ** self.params.q for entry in self.boxes))


def tail_mass(spectrum: SpectralField, k_max: int) -> float:
    """L² mass of the coefficients outside |ξ|_∞ ≤ K_max − 1."""
    inside = lattice_box_mask(spectrum.grid, k_max - 1)
    outside = np.abs(spectrum.coeffs[~inside]) ** 2
    return float(np.sqrt(spectrum.grid.volume * outside.sum()))


def modulation_norm_report(
    value: Operand,
    mp: ModulationParams,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
    include_zero_boxes: bool = False,
) -> NormBreakdown:
    """Norm plus per-box breakdown and tail mass."""
    spectrum = to_spectral(value)
    window = resolve_window(window)
    if mp.n != spectrum.grid.n:
        raise ValidationError("n", f"parameters are for n={mp.n}, field lives on {spectrum.grid}")
    k_max = check_k_max(spectrum.grid, k_max)
    norms = box_norms(spectrum, mp.p, window, k_max)
    weighted = bracket(spectrum.grid.n, k_max) ** mp.s * norms
    offsets = box_indices(k_max)

    entries = []
    for position in itertools.product(range(2 * k_max + 1), repeat=spectrum.grid.n):
        if norms[position] == 0.0 and not include_zero_boxes:
            continue
        entries.append(BoxEntry(
            k=tuple(int(offsets[i]) for i in position),
            box_norm=float(norms[position]),
            weighted=float(weighted[position]),
        ))

    return NormBreakdown(
        value=combine_lq(weighted, mp.q),
        params=mp,
        window=window.kind,
        k_max=k_max,
        tail_mass=tail_mass(spectrum, k_max),
        boxes=entries,
    )


# === Decomposition ===

def box_project(
    value: Operand,
    k: Union[int, Sequence[int]],
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> Field:
    """
    □_k f = 𝓕^{-1}(φ(· − k) 𝓕f).

    Raises:
        DecompositionError: |k|_∞ > K_max
    """
    spectrum = to_spectral(value)
    window = resolve_window(window)
    k_max = check_k_max(spectrum.grid, k_max)
    k = (int(k),) if np.isscalar(k) else tuple(int(c) for c in k)
    if len(k) != spectrum.grid.n:
        raise ValidationError("k", f"box index needs {spectrum.grid.n} components, got {k}")
    if max(abs(c) for c in k) > k_max:
        raise DecompositionError(f"box {k} outside the active range |k| <= {k_max}")
    return fft_inverse(box_coefficients(spectrum, k, window))


class Decomposition(Mapping):
    """
    Mapping k ↦ □_k f over all |k|_∞ ≤ K_max.

    Pieces are built on access; iteration yields every active box.
    """

    def __init__(self, value: Operand, window: Window, k_max: int):
        self.spectrum = to_spectral(value)
        self.window = window
        self.k_max = k_max
        self.grid: GridSpec = self.spectrum.grid

    def __getitem__(self, k) -> Field:
        return box_project(self.spectrum, k, self.window, self.k_max)

    def __iter__(self) -> Iterator[BoxIndex]:
        return itertools.product(range(-self.k_max, self.k_max + 1), repeat=self.grid.n)

    def __len__(self) -> int:
        return (2 * self.k_max + 1) ** self.grid.n

    def energies(self) -> np.ndarray:
        return box_energies(self.spectrum, self.window, self.k_max)

    def nonzero_boxes(self, relative_tol: float = 1e-24) -> List[BoxIndex]:
        """Boxes whose L² energy exceeds relative_tol times the total."""
        energies = self.energies()
        total = energies.sum()
        if total == 0.0:
            return []
        offsets = box_indices(self.k_max)
        positions = zip(*np.nonzero(energies > relative_tol * total))
        return [tuple(int(offsets[i]) for i in position) for position in positions]

    def reconstruct(self) -> Field:
        """Σ_k □_k f, summed in coefficient space."""
        matrix = axis_window_matrix(self.grid, self.window, self.k_max)
        column_sums = np.asarray(matrix.sum(axis=0)).ravel()
        total = np.ones(())
        for axis in range(self.grid.n):
            shape = [1] * self.grid.n
            shape[axis] = self.grid.M
            total = total * column_sums.reshape(shape)
        return fft_inverse(self.spectrum.multiply(total))


def decompose(
    value: Operand,
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> Decomposition:
    """
    Frequency-uniform decomposition of f.

    Raises:
        DecompositionError: K_max + 1 > M/(2P)
    """
    spectrum = to_spectral(value)
    return Decomposition(spectrum, resolve_window(window), check_k_max(spectrum.grid, k_max))


# === σ-calculus and operators ===

def sigma_index(s: float, q: float, n: int) -> float:
    """σ(s,q) = s − n(1 − 1/q)."""
    if q < 1.0:
        raise ValidationError("q", f"exponent must lie in [1, inf], got {q}")
    return sigma_value(s, q, n)


def apply_bessel(value: Operand, sigma: float) -> Field:
    """J_σ f: coefficients times (1 + |ξ|²)^{σ/2}."""
    spectrum = to_spectral(value)
    multiplier = (1.0 + spectrum.grid.frequency_norm_squared()) ** (sigma / 2.0)
    return fft_inverse(spectrum.multiply(multiplier))


class Embedding(str, Enum):
    """Outcome of the embedding predicate."""
    MONOTONE = "Embeds-2.1"
    SUMMABILITY_TRADE = "Embeds-2.2"
    UNKNOWN = "Unknown"


def embedding_predicate(mp1: ModulationParams, mp2: ModulationParams) -> Embedding:
    """
    Decide M^{s1}_{p1,q1} ⊂ M^{s2}_{p2,q2} from the two sufficient conditions.

    MONOTONE:           s1 ≥ s2, p1 ≤ p2, q1 ≤ q2
    SUMMABILITY_TRADE:  q1 > q2, s1 > s2, s1 − s2 > n/q2 − n/q1
    """
    if mp1.n != mp2.n:
        raise ValidationError("n", f"dimensions differ: {mp1.n} vs {mp2.n}")
    if mp1.s >= mp2.s and mp1.p <= mp2.p and mp1.q <= mp2.q:
        return Embedding.MONOTONE
    n = mp1.n
    if mp1.q > mp2.q and mp1.s > mp2.s and mp1.s - mp2.s > n / mp2.q - n / mp1.q:
        return Embedding.SUMMABILITY_TRADE
    return Embedding.UNKNOWN


def interaction_norm(
    u: Operand,
    v: Operand,
    i: Sequence[int],
    i1: Sequence[int],
    i2: Sequence[int],
    window: Union[Window, str, None] = None,
    k_max: Optional[int] = None,
) -> float:
    """‖□_i(□_{i1}u · □_{i2}v)‖₂; zero whenever |i − i1 − i2|_∞ > INTERACTION_RADIUS."""
    first, second = to_spectral(u), to_spectral(v)
    check_same_grid(first, second)
    window = resolve_window(window)
    k_max = check_k_max(first.grid, k_max)
    product = multiply_dealiased(
        box_project(first, i1, window, k_max),
        box_project(second, i2, window, k_max),
    )
    piece = box_project(product, i, window, k_max)
    return lp_norm(piece, 2.0)
