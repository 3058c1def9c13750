"""
Fields and Transforms
=====================
Immutable sample/coefficient containers, the discrete Fourier transform
pair and L^p quadrature norms.

Convention:
    f(x_j) = Σ_m c_m e^{i ξ_m · x_j},   c_m = M^{−n} Σ_j f(x_j) e^{−i ξ_m · x_j}

so fft_forward is ``fftn / M^n`` and fft_inverse is ``ifftn · M^n``.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.fft

from core.exceptions import GridMismatchError, ValidationError
from core.grid import GridSpec


def _frozen_array(values: np.ndarray, grid: GridSpec, name: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128, copy=True)
    if array.ndim == 1 and grid.n > 1:
        if array.size != grid.size:
            raise ValidationError(name, f"expected {grid.size} values, got {array.size}")
        array = array.reshape(grid.shape)
    if array.shape != grid.shape:
        raise ValidationError(name, f"expected shape {grid.shape}, got {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples on a periodized grid."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, self.grid, "samples"))

    def __add__(self, other: "Field") -> "Field":
        check_same_grid(self, other)
        return Field(self.grid, self.samples + other.samples)

    def __sub__(self, other: "Field") -> "Field":
        check_same_grid(self, other)
        return Field(self.grid, self.samples - other.samples)

    def scale(self, factor: complex) -> "Field":
        return Field(self.grid, factor * self.samples)

    def flat(self) -> np.ndarray:
        """Samples as a flat row-major array."""
        return self.samples.reshape(-1)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients c_m on the frequency lattice, FFT order per axis."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, self.grid, "coeffs"))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def multiply(self, multiplier: np.ndarray) -> "SpectralField":
        """Coefficient-wise product with a multiplier array."""
        return SpectralField(self.grid, self.coeffs * multiplier)

    def scale(self, factor: complex) -> "SpectralField":
        return SpectralField(self.grid, factor * self.coeffs)

    def coefficient(self, mode: Sequence[int]) -> complex:
        """Coefficient at integer mode vector m."""
        index = tuple(self.grid.mode_index(int(m)) for m in mode)
        return complex(self.coeffs[index])


Operand = Union[Field, SpectralField]


def check_same_grid(left: Operand, right: Operand) -> None:
    """Raise GridMismatchError unless both operands share a grid."""
    if left.grid != right.grid:
        raise GridMismatchError(left.grid, right.grid)


# === Transforms ===

def fft_forward(f: Field) -> SpectralField:
    """Samples → coefficients under the coefficients-sum convention."""
    coeffs = scipy.fft.fftn(f.samples, norm="forward")
    return SpectralField(f.grid, coeffs)


def fft_inverse(c: SpectralField) -> Field:
    """Coefficients → samples; exact inverse of fft_forward."""
    samples = scipy.fft.ifftn(c.coeffs, norm="forward")
    return Field(c.grid, samples)


def to_spectral(value: Operand) -> SpectralField:
    return value if isinstance(value, SpectralField) else fft_forward(value)


def to_field(value: Operand) -> Field:
    return value if isinstance(value, Field) else fft_inverse(value)


# === Norms ===

def lp_norm(f: Field, p: float) -> float:
    """
    Quadrature L^p norm (h^n Σ_j |f(x_j)|^p)^{1/p}; max_j |f(x_j)| for p = ∞.

    Raises:
        ValidationError: p < 1
    """
    p = float(p)
    if np.isnan(p) or p < 1.0:
        raise ValidationError("p", f"exponent must lie in [1, inf], got {p}")
    magnitude = np.abs(f.samples)
    peak = float(magnitude.max()) if magnitude.size else 0.0
    if peak == 0.0:
        return 0.0
    if np.isinf(p):
        return peak
    if p == 2.0:
        return float(np.sqrt(f.grid.cell_volume * np.sum(magnitude ** 2)))
    # scaled by the peak to keep large p finite
    return peak * float((f.grid.cell_volume * np.sum((magnitude / peak) ** p)) ** (1.0 / p))


def spectral_l2_norm(c: SpectralField) -> float:
    """L² norm through Parseval: (L^n Σ |c_m|²)^{1/2}."""
    return float(np.sqrt(c.grid.volume * np.sum(np.abs(c.coeffs) ** 2)))


# === Constructors ===

def zero_field(grid: GridSpec) -> Field:
    return Field(grid, np.zeros(grid.shape, dtype=np.complex128))


def constant_field(grid: GridSpec, value: complex) -> Field:
    return Field(grid, np.full(grid.shape, value, dtype=np.complex128))


def field_from_function(grid: GridSpec, func: Callable[..., np.ndarray], centered: bool = False) -> Field:
    """Sample func(x_1, …, x_n) on the grid (broadcast coordinate arrays)."""
    values = func(*grid.coordinates(centered=centered))
    return Field(grid, np.broadcast_to(values, grid.shape))


def spectral_from_modes(grid: GridSpec, modes: Mapping[Tuple[int, ...], complex]) -> SpectralField:
    """Coefficients from a {integer mode vector: amplitude} mapping."""
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    for mode, amplitude in modes.items():
        mode = (mode,) if np.isscalar(mode) else tuple(mode)
        if len(mode) != grid.n:
            raise ValidationError("mode", f"expected {grid.n} components, got {mode}")
        coeffs[tuple(grid.mode_index(int(m)) for m in mode)] += amplitude
    return SpectralField(grid, coeffs)


def single_mode(grid: GridSpec, mode: Union[int, Sequence[int]], amplitude: complex = 1.0) -> Field:
    """amplitude · e^{i ξ_m · x} for integer mode vector m (ξ = m/P)."""
    if np.isscalar(mode):
        key = (int(mode),) + (0,) * (grid.n - 1)
    else:
        key = tuple(int(m) for m in mode)
    return fft_inverse(spectral_from_modes(grid, {key: amplitude}))


def lattice_box_mask(grid: GridSpec, radius: float, center: Optional[Iterable[float]] = None) -> np.ndarray:
    """Boolean mask of lattice frequencies with |ξ − center|_∞ ≤ radius."""
    center = np.zeros(grid.n) if center is None else np.asarray(list(center), dtype=float)
    mask = np.ones(grid.shape, dtype=bool)
    for axis, xi in enumerate(grid.frequency_mesh()):
        mask = mask & (np.abs(xi - center[axis]) <= radius + 1e-12)
    return mask


def random_band_limited(
    grid: GridSpec,
    radius: float,
    rng: np.random.Generator,
    real: bool = False,
) -> Field:
    """Random field with Gaussian coefficients on |ξ|_∞ ≤ radius."""
    mask = lattice_box_mask(grid, radius)
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    count = int(mask.sum())
    coeffs[mask] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    field = fft_inverse(SpectralField(grid, coeffs))
    if real:
        field = Field(grid, field.samples.real)
    return field
