"""
Propagators
===========
Fourier-multiplier semigroups U(t) = 𝓕^{-1} m_t(ξ) 𝓕.

    fractional-heat(α)   m_t = exp(−t|ξ|^α)                 θ = 1/α
    schrodinger          m_t = exp(−it|ξ|²)                 θ = 0
    kg-cos               m_t = cos(tω),      ω = √(1+|ξ|²)  θ = 0
    kg-sinc              m_t = sin(tω)/ω                    θ = 0

The first two are semigroups generated by a symbol p(ξ); the Klein–Gordon
pair are the cosine and sine propagators of u_tt + (1 − Δ)u = 0.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from core.config import get_settings
from core.exceptions import PropagatorError, ValidationError
from core.field import Field, Operand, SpectralField, check_same_grid, fft_inverse, lp_norm, to_spectral
from core.grid import GridSpec, make_grid, smallest_power_of_two
from schemas.configs import PropagatorKind
from services.modulation import box_coefficients
from services.windows import box_weights, make_window


class PropagatorSpec(BaseModel):
    """A Fourier-multiplier propagator and its smoothing index θ."""

    model_config = ConfigDict(frozen=True)

    kind: PropagatorKind
    alpha: Optional[float] = None

    @model_validator(mode="after")
    def check_alpha(self) -> "PropagatorSpec":
        if self.kind == "fractional-heat" and not (self.alpha is not None and self.alpha > 0.0):
            raise ValueError("fractional-heat needs alpha > 0")
        return self

    @property
    def theta(self) -> float:
        return 1.0 / self.alpha if self.kind == "fractional-heat" else 0.0

    @property
    def dissipative(self) -> bool:
        return self.kind == "fractional-heat"

    @property
    def has_symbol(self) -> bool:
        """True for semigroups exp(t p(ξ)) (heat, Schrödinger)."""
        return self.kind in ("fractional-heat", "schrodinger")

    def symbol(self, xi_squared: np.ndarray) -> np.ndarray:
        """p(ξ) from |ξ|²: −|ξ|^α or −i|ξ|²."""
        if self.kind == "fractional-heat":
            return -(xi_squared ** (self.alpha / 2.0)) + 0j
        if self.kind == "schrodinger":
            return -1j * xi_squared
        raise PropagatorError(f"{self.kind} is not generated by a first-order symbol")

    def multiplier_from(self, xi_squared: np.ndarray, t: Union[float, np.ndarray]) -> np.ndarray:
        """
        m_t(ξ). With an array of times the result gains a leading time axis.
        """
        t = np.asarray(t, dtype=float)
        times = t.reshape(t.shape + (1,) * xi_squared.ndim)
        if self.has_symbol:
            return np.exp(times * self.symbol(xi_squared))
        omega = np.sqrt(1.0 + xi_squared)
        if self.kind == "kg-cos":
            return np.cos(times * omega) + 0j
        return np.sin(times * omega) / omega + 0j

    def multiplier(self, grid: GridSpec, t: float) -> np.ndarray:
        self.check_time(t)
        return self.multiplier_from(grid.frequency_norm_squared(), t)

    def check_time(self, t: Union[float, np.ndarray]) -> None:
        if self.dissipative and np.any(np.asarray(t) < 0.0):
            raise PropagatorError(f"negative time t={np.min(t)} with fractional-heat (backward heat flow)")

    def __str__(self) -> str:
        return f"fractional-heat(alpha={self.alpha:g})" if self.dissipative else self.kind


def make_propagator(kind: str, alpha: Optional[float] = None) -> PropagatorSpec:
    """
    Build a propagator spec.

    Raises:
        ValidationError: unknown kind or missing/nonpositive alpha for fractional-heat
    """
    if kind not in ("fractional-heat", "schrodinger", "kg-cos", "kg-sinc"):
        raise ValidationError("kind", f"unknown propagator '{kind}'")
    if kind == "fractional-heat" and (alpha is None or not alpha > 0.0):
        raise ValidationError("alpha", f"fractional-heat needs alpha > 0, got {alpha}")
    return PropagatorSpec(kind=kind, alpha=alpha if kind == "fractional-heat" else None)


def duhamel_kernel(spec: PropagatorSpec) -> PropagatorSpec:
    """Kernel multiplying the forcing inside the Duhamel integral."""
    if spec.kind in ("kg-cos", "kg-sinc"):
        return PropagatorSpec(kind="kg-sinc")
    return spec


def propagate_spectral(spectrum: SpectralField, spec: PropagatorSpec, t: float) -> SpectralField:
    return spectrum.multiply(spec.multiplier(spectrum.grid, t))


def propagate(f: Operand, spec: PropagatorSpec, t: float) -> Field:
    """
    U(t)f by coefficient-wise multiplication.

    Raises:
        PropagatorError: t < 0 with fractional-heat
    """
    return fft_inverse(propagate_spectral(to_spectral(f), spec, t))


def kg_free_evolution(u0: Operand, u1: Operand, t: float) -> Field:
    """cos(tω)u0 + (sin(tω)/ω)u1, the free Klein–Gordon flow."""
    first, second = to_spectral(u0), to_spectral(u1)
    check_same_grid(first, second)
    xi_squared = first.grid.frequency_norm_squared()
    cosine = PropagatorSpec(kind="kg-cos").multiplier_from(xi_squared, t)
    sine = PropagatorSpec(kind="kg-sinc").multiplier_from(xi_squared, t)
    return fft_inverse(SpectralField(first.grid, cosine * first.coeffs + sine * second.coeffs))


def multiplier_table(spec: PropagatorSpec, grid: GridSpec, t: float) -> List[Tuple[Tuple[float, ...], complex]]:
    """(frequency vector, multiplier) rows over the lattice, FFT order."""
    values = spec.multiplier(grid, t)
    freqs = grid.frequencies()
    rows = []
    for index in np.ndindex(grid.shape):
        rows.append((tuple(float(freqs[i]) for i in index), complex(values[index])))
    return rows


# === Per-box decay ===

@dataclass
class BoxDecayResult:
    """Measured per-box contraction of U(t) against the exact p = 2 bound."""
    k: Tuple[int, ...]
    t: float
    bound: float
    measured: float
    operator_norm: float

    @property
    def within_bound(self) -> bool:
        return self.measured <= self.bound * (1.0 + 1e-10)


def decay_grid(k: Sequence[int]) -> GridSpec:
    """Grid with P = 4 resolving supp φ_k with room to spare."""
    P = 4
    span = max(abs(int(c)) for c in k) + 2
    return make_grid(len(k), P, smallest_power_of_two(2 * P * span))


def box_decay_check(
    spec: PropagatorSpec,
    k: Union[int, Sequence[int]],
    t: float,
    ensemble_size: Optional[int] = None,
    seed: Optional[int] = None,
    p: float = 2.0,
) -> BoxDecayResult:
    """
    measured = max over random fields of ‖□_k U(t)f‖_p / ‖□_k f‖_p,
    bound = exp(−t(|k| − √n)^α).

    For p = 2 the ratio is evaluated in coefficient space.

    Raises:
        ValidationError: spec is not fractional-heat, |k|_∞ < 2 or t < 0
    """
    if not spec.dissipative:
        raise ValidationError("spec", "box decay applies to the fractional heat semigroup only")
    k = (int(k),) if np.isscalar(k) else tuple(int(c) for c in k)
    if max(abs(c) for c in k) < 2:
        raise ValidationError("k", f"box index must satisfy |k|_inf >= 2, got {k}")
    if t < 0.0:
        raise ValidationError("t", f"time must be nonnegative, got {t}")

    settings = get_settings()
    ensemble_size = ensemble_size or settings.DECAY_ENSEMBLE_SIZE
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    n = len(k)
    grid = decay_grid(k)
    window = make_window("raised-cosine")
    weights = box_weights(grid, window, np.asarray(k))
    multiplier = spec.multiplier(grid, t)
    support = weights > 0.0

    norm_k = math.sqrt(sum(c * c for c in k))
    bound = math.exp(-t * max(norm_k - math.sqrt(n), 0.0) ** spec.alpha)
    operator_norm = float(np.abs(multiplier[support]).max())

    measured = 0.0
    for _ in range(ensemble_size):
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        count = int(support.sum())
        coeffs[support] = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        if p == 2.0:
            base = np.sum((weights * np.abs(coeffs)) ** 2)
            damped = np.sum((weights * np.abs(multiplier * coeffs)) ** 2)
            ratio = math.sqrt(damped / base)
        else:
            spectrum = SpectralField(grid, coeffs)
            before = lp_norm(fft_inverse(box_coefficients(spectrum, k, window)), p)
            after = lp_norm(fft_inverse(box_coefficients(spectrum.multiply(multiplier), k, window)), p)
            ratio = after / before
        measured = max(measured, ratio)

    return BoxDecayResult(k=k, t=float(t), bound=bound, measured=measured, operator_norm=operator_norm)
