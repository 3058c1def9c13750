"""
Dealiasing
==========
Products and powers of band-limited fields computed on a zero-padded grid
and truncated back, so that every retained mode is exact.

A product whose factors occupy integer bands b_1, …, b_k (|m|_∞ ≤ b_i) has
modes up to B = Σ b_i. On a padded grid of M' points per axis the retained
range [−M/2, M/2) is free of aliases iff M' ≥ B + M/2 + 1.
"""

import math
from typing import Optional, Sequence

import numpy as np
import scipy.fft

from core.exceptions import HeadroomError, ValidationError
from core.field import Field, Operand, SpectralField, check_same_grid, fft_inverse, to_spectral
from core.grid import GridSpec

# coefficients below this fraction of the peak do not count as occupied
BAND_TOLERANCE = 1e-13


def occupied_band(spectrum: SpectralField, tolerance: float = BAND_TOLERANCE) -> int:
    """Largest |m|_∞ (integer mode) carrying a coefficient above tolerance · peak."""
    magnitude = np.abs(spectrum.coeffs)
    peak = magnitude.max() if magnitude.size else 0.0
    if peak == 0.0:
        return 0
    modes = np.abs(spectrum.grid.integer_modes())
    occupied = magnitude > tolerance * peak
    band = 0
    for axis in range(spectrum.grid.n):
        along = occupied.any(axis=tuple(a for a in range(spectrum.grid.n) if a != axis))
        band = max(band, int(modes[along].max()))
    return band


def required_padding(samples: int, total_band: int) -> int:
    """Smallest even M' with M' ≥ max(M, B + M/2 + 1)."""
    required = max(samples, total_band + samples // 2 + 1)
    return required + (required % 2)


def padded_size(samples: int, factor: float) -> int:
    """Even ceiling of factor · M."""
    size = int(math.ceil(factor * samples - 1e-9))
    return size + (size % 2)


def _embedding_index(grid: GridSpec, padded: int):
    index = grid.integer_modes() % padded
    return np.ix_(*([index] * grid.n))


def _to_padded_samples(spectrum: SpectralField, padded: int) -> np.ndarray:
    coeffs = np.zeros((padded,) * spectrum.grid.n, dtype=np.complex128)
    coeffs[_embedding_index(spectrum.grid, padded)] = spectrum.coeffs
    return scipy.fft.ifftn(coeffs, norm="forward")


def _truncate(grid: GridSpec, samples: np.ndarray, padded: int) -> SpectralField:
    coeffs = scipy.fft.fftn(samples, norm="forward")
    return SpectralField(grid, coeffs[_embedding_index(grid, padded)])


def product_spectral(factors: Sequence[SpectralField], padded: Optional[int] = None) -> SpectralField:
    """Dealiased product of several fields, in coefficient space."""
    if not factors:
        raise ValidationError("factors", "need at least one factor")
    grid = factors[0].grid
    for other in factors[1:]:
        check_same_grid(factors[0], other)
    bands = [occupied_band(factor) for factor in factors]
    required = required_padding(grid.M, sum(bands))
    if padded is None:
        padded = required
    elif padded < required:
        raise HeadroomError(band=max(bands), power=len(factors), padded=padded, required=required)

    samples = _to_padded_samples(factors[0], padded)
    for factor in factors[1:]:
        samples = samples * _to_padded_samples(factor, padded)
    return _truncate(grid, samples, padded)


def multiply_dealiased(u: Operand, v: Operand, factor: Optional[float] = None) -> Field:
    """u · v with exact retained modes; padding sized from the occupied bands unless factor is given."""
    first, second = to_spectral(u), to_spectral(v)
    padded = None if factor is None else padded_size(first.grid.M, factor)
    return fft_inverse(product_spectral([first, second], padded))


def pow_spectral(spectrum: SpectralField, k: int, factor: Optional[float] = None) -> SpectralField:
    """
    u^k on the padded grid of even ceil(factor · M) points per axis.

    Raises:
        HeadroomError: padded grid too small for the occupied band
    """
    if int(k) != k or k < 1:
        raise ValidationError("k", f"power must be a positive integer, got {k}")
    k = int(k)
    if factor is None:
        factor = (k + 1) / 2.0
    grid = spectrum.grid
    if k == 1:
        return spectrum
    band = occupied_band(spectrum)
    padded = max(padded_size(grid.M, factor), grid.M)
    required = required_padding(grid.M, k * band)
    if padded < required:
        raise HeadroomError(band=band, power=k, padded=padded, required=required)
    samples = _to_padded_samples(spectrum, padded)
    power = samples.copy()
    for _ in range(k - 1):
        power *= samples
    return _truncate(grid, power, padded)


def pow_dealiased(u: Operand, k: int, factor: Optional[float] = None) -> Field:
    """Pointwise u^k, exact on the retained modes."""
    return fft_inverse(pow_spectral(to_spectral(u), k, factor))

