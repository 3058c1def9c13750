"""
Solver
======
Integral-form solver for the Cauchy problem

    u(t) = U(t)u₀ + ∫₀ᵗ K(t − τ) u(τ)^k dτ

on a periodic grid. K is the propagator's Duhamel kernel (the propagator
itself for the fractional heat and Schrödinger flows, the sine propagator
for Klein–Gordon).

Two modes:
    picard-global   Picard iteration of the Duhamel map on the whole of
                    [0, T], collocated on Gauss–Legendre panels
    etd-step        exponential time differencing, order 1 or 2

Both operate on Fourier coefficients. The linear flow carries every mode
of u₀; the power is taken of the state with its Nyquist modes cleared and
is dealiased, so the padded grid always has headroom.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.exceptions import ConvergenceError, PropagatorError, ValidationError
from core.field import Field, Operand, SpectralField, fft_inverse, to_field, to_spectral, zero_field
from core.grid import GridSpec
from core.logger import get_logger
from core.metrics import track_performance
from schemas.configs import EvolveConfig, ModulationParams
from services.dealias import pow_spectral
from services.modulation import modulation_norm, resolve_window
from services.propagator import PropagatorSpec, duhamel_kernel

CONTOUR_POINTS = 32


# === Quadrature helpers ===

def gauss_legendre(count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [−1, 1]."""
    if count < 1:
        raise ValidationError("quad_nodes", f"need at least one quadrature node, got {count}")
    return np.polynomial.legendre.leggauss(count)


def lagrange_matrix(nodes: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    Barycentric Lagrange interpolation matrix L with L @ values(nodes) = values(targets).
    Targets may have any shape; the node axis is appended last.
    """
    nodes = np.asarray(nodes, dtype=float)
    targets = np.asarray(targets, dtype=float)
    differences = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(differences, 1.0)
    weights = 1.0 / differences.prod(axis=1)

    offsets = targets[..., None] - nodes
    exact = offsets == 0.0
    offsets = np.where(exact, 1.0, offsets)
    terms = weights / offsets
    matrix = terms / terms.sum(axis=-1, keepdims=True)
    hit = exact.any(axis=-1)
    return np.where(hit[..., None], exact.astype(float), matrix)


@dataclass(frozen=True)
class TimeMesh:
    """J uniform panels on [0, T] with Q Gauss–Legendre nodes each."""
    T: float
    panels: int
    quad_nodes: int

    @property
    def step(self) -> float:
        return self.T / self.panels

    @property
    def ends(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.panels + 1)

    def reference(self) -> Tuple[np.ndarray, np.ndarray]:
        return gauss_legendre(self.quad_nodes)

    def node_times(self) -> np.ndarray:
        """(J, Q) interior collocation times."""
        x, _ = self.reference()
        return self.ends[:-1, None] + (x[None, :] + 1.0) * self.step / 2.0


# === Trajectories ===

@dataclass
class Panel:
    """Dense output of one time panel: states at `times`, endpoints included."""
    start: float
    end: float
    times: np.ndarray
    coeffs: np.ndarray


@dataclass
class SolverDiagnostics:
    mode: str
    status: str = "converged"
    iterations: int = 0
    differences: List[float] = field(default_factory=list)
    contraction_ratios: List[float] = field(default_factory=list)
    residual: Optional[float] = None

    @property
    def contraction_factor(self) -> Optional[float]:
        """Largest observed d_{m+1}/d_m."""
        return max(self.contraction_ratios) if self.contraction_ratios else None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "iterations": self.iterations,
            "differences": list(self.differences),
            "contraction_ratios": list(self.contraction_ratios),
            "contraction_factor": self.contraction_factor,
            "residual": self.residual,
        }


@dataclass
class Trajectory:
    times: np.ndarray
    states: List[Field]
    diagnostics: SolverDiagnostics
    u0: Field
    spec: PropagatorSpec
    panels: List[Panel] = field(default_factory=list)

    @property
    def grid(self) -> GridSpec:
        return self.u0.grid

    @property
    def final(self) -> Field:
        return self.states[-1]

    def norms(self, mp: ModulationParams, window=None, k_max: Optional[int] = None) -> List[float]:
        return [modulation_norm(state, mp, window, k_max) for state in self.states]


# === Shared pieces ===

def _retained_mask(grid: GridSpec) -> np.ndarray:
    """False on the Nyquist modes m_i = −M/2."""
    modes = grid.integer_modes()
    axes = np.meshgrid(*([modes] * grid.n), indexing="ij", sparse=True)
    mask = np.ones(grid.shape, dtype=bool)
    for axis in axes:
        mask = mask & (axis != -grid.M // 2)
    return mask


class _Nonlinearity:
    """c ↦ coefficients of (c without Nyquist modes)^k, dealiased; batched over leading axes."""

    def __init__(self, grid: GridSpec, k: int, factor: Optional[float], enabled: bool = True):
        self.grid = grid
        self.k = k
        self.factor = factor
        self.enabled = enabled
        self.mask = _retained_mask(grid)

    def __call__(self, coeffs: np.ndarray) -> np.ndarray:
        if not self.enabled:
            return np.zeros_like(coeffs)
        out = np.empty_like(coeffs)
        batch = coeffs.shape[: coeffs.ndim - self.grid.n]
        for index in np.ndindex(batch):
            power = pow_spectral(SpectralField(self.grid, coeffs[index] * self.mask), self.k, self.factor)
            out[index] = power.coeffs * self.mask
        return out


class _NormProbe:
    """The M^s_{p,q} norm used for convergence and blow-up checks."""

    def __init__(self, grid: GridSpec, cfg: EvolveConfig):
        self.grid = grid
        self.params = cfg.norm_params(grid.n)
        self.window = resolve_window(cfg.window)
        self.k_max = cfg.k_max

    def __call__(self, coeffs: np.ndarray) -> float:
        if not np.all(np.isfinite(coeffs)):
            return float("inf")
        return modulation_norm(SpectralField(self.grid, coeffs), self.params, self.window, self.k_max)


def _states(grid: GridSpec, coeffs: np.ndarray, u0: Optional[Operand] = None) -> List[Field]:
    """States from coefficients; the t = 0 state is u0 itself when it carries u0's coefficients."""
    states = [fft_inverse(SpectralField(grid, c)) for c in coeffs]
    if u0 is not None and len(states) and np.array_equal(coeffs[0], to_spectral(u0).coeffs):
        states[0] = to_field(u0)
    return states


def _initial_coefficients(u0: Operand) -> Tuple[SpectralField, np.ndarray]:
    spectrum = to_spectral(u0)
    return spectrum, np.array(spectrum.coeffs, dtype=np.complex128)


# === Duhamel quadrature ===

def duhamel(
    spec: PropagatorSpec,
    forcing: Callable[[float], Operand],
    t: float,
    quad_nodes: int,
) -> Field:
    """
    ∫₀ᵗ K(t − τ) F(τ) dτ by Gauss–Legendre quadrature in τ, mode by mode.

    Raises:
        ValidationError: quad_nodes < 1
        PropagatorError: t < 0 for the fractional heat flow
    """
    x, w = gauss_legendre(quad_nodes)
    spec.check_time(t)
    if t == 0.0:
        return zero_field(to_spectral(forcing(0.0)).grid)
    kernel = duhamel_kernel(spec)
    total: Optional[SpectralField] = None
    taus = (x + 1.0) * t / 2.0
    for tau, weight in zip(taus, w):
        value = to_spectral(forcing(float(tau)))
        xi_squared = value.grid.frequency_norm_squared()
        term = value.multiply(kernel.multiplier_from(xi_squared, t - tau)).scale(weight * t / 2.0)
        total = term if total is None else total + term
    return fft_inverse(total)


# === Picard iteration ===

class PicardOperator:
    """
    The discrete Duhamel map Φ on a panel mesh.

    Unknowns are the coefficients at the panel ends t_j and at the interior
    nodes τ_{j,l}. Integrals over whole earlier panels use the panel's own
    nodes; the partial panel [t_j, τ_{j,l}] uses Q sub-nodes at which the
    forcing is Lagrange-interpolated from the panel nodes.
    """

    def __init__(self, grid: GridSpec, spec: PropagatorSpec, cfg: EvolveConfig):
        self.grid = grid
        self.spec = spec
        self.mesh = TimeMesh(cfg.T, cfg.time_nodes - 1, cfg.quad_nodes)
        self.kernel = duhamel_kernel(spec)
        self.nonlinearity = _Nonlinearity(grid, cfg.power_k, cfg.dealias_factor, cfg.nonlinear)
        self._xi_squared = grid.frequency_norm_squared()
        self._build()

    def _multiplier(self, times: np.ndarray) -> np.ndarray:
        return self.kernel.multiplier_from(self._xi_squared, times)

    def _build(self) -> None:
        mesh = self.mesh
        x, w = mesh.reference()
        delta = mesh.step
        self.weights = w * delta / 2.0

        # end targets: t_j − τ_{i,l} = dΔ − (x_l + 1)Δ/2 with d = j − i
        self.end_kernels = {
            d: self._multiplier(d * delta - (x + 1.0) * delta / 2.0)
            for d in range(1, mesh.panels + 1)
        }
        # interior targets over whole panels: τ_{j,l} − τ_{i,l'} = dΔ + (x_l − x_l')Δ/2
        self.node_kernels = {
            d: self._multiplier(d * delta + (x[:, None] - x[None, :]) * delta / 2.0)
            for d in range(1, mesh.panels)
        }
        # partial panel: sub-node y_{l,r} = −1 + (x_r + 1)(x_l + 1)/2
        sub_nodes = -1.0 + np.outer(x + 1.0, x + 1.0) / 2.0
        self.sub_interpolation = lagrange_matrix(x, sub_nodes)
        self.sub_weights = np.outer(x + 1.0, w) * delta / 4.0
        self.sub_kernels = self._multiplier(np.outer(x + 1.0, 1.0 - x) * delta / 4.0)

    def free(self, c0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """U(t)u₀ at the ends and at the nodes."""
        ends = self.spec.multiplier_from(self._xi_squared, self.mesh.ends) * c0
        nodes = self.spec.multiplier_from(self._xi_squared, self.mesh.node_times()) * c0
        return ends, nodes

    def apply(self, free_ends: np.ndarray, free_nodes: np.ndarray, nodes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """One application of Φ given the current interior-node coefficients."""
        panels = self.mesh.panels
        forcing = self.nonlinearity(nodes)
        weighted = forcing * self.weights.reshape((1, -1) + (1,) * self.grid.n)

        ends = free_ends.copy()
        for j in range(1, panels + 1):
            for i in range(j):
                ends[j] += np.sum(self.end_kernels[j - i] * weighted[i], axis=0)

        new_nodes = free_nodes.copy()
        for j in range(panels):
            for i in range(j):
                new_nodes[j] += np.einsum("ab...,b...->a...", self.node_kernels[j - i], weighted[i])
            sub_forcing = np.einsum("abc,c...->ab...", self.sub_interpolation, forcing[j])
            new_nodes[j] += np.einsum("ab,ab...->a...", self.sub_weights, self.sub_kernels * sub_forcing)
        return ends, new_nodes

    def panels_from(self, ends: np.ndarray, nodes: np.ndarray) -> List[Panel]:
        out = []
        starts = self.mesh.ends
        times = self.mesh.node_times()
        for j in range(self.mesh.panels):
            out.append(Panel(
                start=float(starts[j]),
                end=float(starts[j + 1]),
                times=np.concatenate(([starts[j]], times[j], [starts[j + 1]])),
                coeffs=np.concatenate((ends[j][None], nodes[j], ends[j + 1][None])),
            ))
        return out


def picard_iterates(u0: Operand, spec: PropagatorSpec, cfg: EvolveConfig, count: int) -> List[List[Field]]:
    """
    States at the trajectory times for u^{(0)}, …, u^{(count)}, where
    u^{(0)}(t) = U(t)u₀ and u^{(m+1)} = Φ(u^{(m)}).
    """
    spectrum, c0 = _initial_coefficients(u0)
    operator = PicardOperator(spectrum.grid, spec, cfg)
    free_ends, free_nodes = operator.free(c0)
    ends, nodes = free_ends, free_nodes
    iterates = [_states(spectrum.grid, ends, u0)]
    for _ in range(count):
        ends, nodes = operator.apply(free_ends, free_nodes, nodes)
        iterates.append(_states(spectrum.grid, ends, u0))
    return iterates


class PicardSolver:
    """Fixed-point iteration of the Duhamel map on the whole interval."""

    def __init__(self, spec: PropagatorSpec, cfg: EvolveConfig):
        self.spec = spec
        self.cfg = cfg
        self.logger = get_logger()

    def solve(self, u0: Operand) -> Trajectory:
        cfg = self.cfg
        spectrum, c0 = _initial_coefficients(u0)
        grid = spectrum.grid
        u0_field = to_field(u0)
        operator = PicardOperator(grid, self.spec, cfg)
        norm = _NormProbe(grid, cfg)
        times = operator.mesh.ends
        free_ends, free_nodes = operator.free(c0)

        if not cfg.nonlinear:
            diagnostics = SolverDiagnostics(mode="picard-global", status="linear")
            return Trajectory(times, _states(grid, free_ends, u0), diagnostics, u0_field, self.spec,
                              operator.panels_from(free_ends, free_nodes))

        cap = cfg.blowup_factor * norm(c0)
        diagnostics = SolverDiagnostics(mode="picard-global", status="running")
        ends, nodes = free_ends, free_nodes

        with np.errstate(over="ignore", invalid="ignore"):
            for iteration in range(1, cfg.picard_max_iter + 1):
                if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(ends))):
                    diagnostics.status = "blowup"
                    break
                new_ends, new_nodes = operator.apply(free_ends, free_nodes, nodes)
                difference = max(norm(new_ends[j] - ends[j]) for j in range(len(times)))
                diagnostics.iterations = iteration
                if diagnostics.differences and diagnostics.differences[-1] > 0.0:
                    diagnostics.contraction_ratios.append(difference / diagnostics.differences[-1])
                diagnostics.differences.append(difference)
                ends, nodes = new_ends, new_nodes

                self.logger.debug(
                    "Picard iteration",
                    context={"iteration": iteration, "difference": difference},
                )
                peak = max(norm(c) for c in ends)
                if cap > 0.0 and not peak <= cap:
                    diagnostics.status = "blowup"
                    self.logger.warning(
                        "Picard iterates exceeded the blow-up cap",
                        context={"iteration": iteration, "norm": peak, "cap": cap},
                    )
                    break
                if difference <= cfg.picard_tol:
                    diagnostics.status = "converged"
                    break

        if diagnostics.status == "running":
            raise ConvergenceError(
                iterations=diagnostics.iterations,
                last_difference=diagnostics.differences[-1],
                diagnostics=diagnostics.to_dict(),
            )
        if diagnostics.status == "converged":
            self.logger.info(
                "Picard iteration converged",
                context={"iterations": diagnostics.iterations, "contraction_factor": diagnostics.contraction_factor},
            )
        return Trajectory(times, _states(grid, ends, u0), diagnostics, u0_field, self.spec,
                          operator.panels_from(ends, nodes))


@track_performance("picard_solve")
def picard_solve(u0: Operand, spec: PropagatorSpec, cfg: EvolveConfig) -> Trajectory:
    """
    Iterate u^{(m+1)} = Φ(u^{(m)}) until sup_j ‖u^{(m+1)}(t_j) − u^{(m)}(t_j)‖ ≤ picard_tol.

    Raises:
        ConvergenceError: picard_max_iter reached without convergence
        HeadroomError: dealias_factor too small for the data band
    """
    return PicardSolver(spec, cfg).solve(u0)


# === Exponential time differencing ===

def phi_functions(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    φ₁(z) = (e^z − 1)/z and φ₂(z) = (e^z − 1 − z)/z² by the mean over a
    unit circle of contour points around each z.
    """
    z = np.asarray(z, dtype=np.complex128)
    roots = np.exp(2j * np.pi * (np.arange(CONTOUR_POINTS) + 0.5) / CONTOUR_POINTS)
    shifted = z[..., None] + roots
    exp_shifted = np.exp(shifted)
    phi1 = ((exp_shifted - 1.0) / shifted).mean(axis=-1)
    phi2 = ((exp_shifted - 1.0 - shifted) / shifted ** 2).mean(axis=-1)
    if np.all(z.imag == 0.0):
        phi1, phi2 = phi1.real + 0j, phi2.real + 0j
    return phi1, phi2


class EtdSolver:
    """ETD1 / ETDRK2 (Cox–Matthews) stepping of û' = L û + N(û)."""

    def __init__(self, spec: PropagatorSpec, cfg: EvolveConfig):
        if not spec.has_symbol:
            raise PropagatorError(f"etd-step needs a semigroup symbol; {spec} has none, use picard-global")
        self.spec = spec
        self.cfg = cfg
        self.logger = get_logger()

    def solve(self, u0: Operand) -> Trajectory:
        cfg = self.cfg
        spectrum, c0 = _initial_coefficients(u0)
        grid = spectrum.grid
        u0_field = to_field(u0)
        intervals = cfg.time_nodes - 1
        h = cfg.T / (intervals * cfg.etd_substeps)
        times = np.linspace(0.0, cfg.T, intervals + 1)

        z = h * self.spec.symbol(grid.frequency_norm_squared())
        decay = np.exp(z)
        phi1, phi2 = phi_functions(z)
        nonlinearity = _Nonlinearity(grid, cfg.power_k, cfg.dealias_factor, cfg.nonlinear)
        norm = _NormProbe(grid, cfg)
        cap = cfg.blowup_factor * norm(c0)

        diagnostics = SolverDiagnostics(mode="etd-step", status="completed" if cfg.nonlinear else "linear")
        ends = [c0]
        panels: List[Panel] = []
        current = c0
        clock = 0.0

        with np.errstate(over="ignore", invalid="ignore"):
            for interval in range(intervals):
                for _ in range(cfg.etd_substeps):
                    forcing = nonlinearity(current)
                    stage = decay * current + h * phi1 * forcing
                    if cfg.etd_order == 2 and cfg.nonlinear and np.all(np.isfinite(stage)):
                        stage = stage + h * phi2 * (nonlinearity(stage) - forcing)
                    panels.append(Panel(clock, clock + h, np.array([clock, clock + h]), np.stack([current, stage])))
                    current = stage
                    clock += h
                    diagnostics.iterations += 1
                    if not np.all(np.isfinite(current)):
                        break
                value = norm(current)
                if cfg.nonlinear and cap > 0.0 and not value <= cap:
                    diagnostics.status = "blowup"
                    self.logger.warning(
                        "ETD stepping exceeded the blow-up cap",
                        context={"time": float(times[interval + 1]), "norm": value, "cap": cap},
                    )
                    break
                ends.append(current)

        kept = times[: len(ends)]
        return Trajectory(kept, _states(grid, np.stack(ends), u0), diagnostics, u0_field, self.spec, panels)


@track_performance("etd_solve")
def etd_solve(u0: Operand, spec: PropagatorSpec, cfg: EvolveConfig) -> Trajectory:
    """
    Exponential time differencing of order cfg.etd_order with
    cfg.etd_substeps steps per trajectory interval.

    Raises:
        PropagatorError: the propagator has no first-order symbol (Klein–Gordon)
    """
    return EtdSolver(spec, cfg).solve(u0)


# === Residual check ===

def _panel_interpolant(panel: Panel, spec: PropagatorSpec, xi_squared: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    States at `targets` inside the panel. For semigroup flows the free part
    U(τ − a)u(a) is carried exactly and only the remainder is interpolated.
    """
    length = panel.end - panel.start
    matrix = lagrange_matrix(
        2.0 * (panel.times - panel.start) / length - 1.0,
        2.0 * (targets - panel.start) / length - 1.0,
    )
    if not spec.has_symbol:
        return np.tensordot(matrix, panel.coeffs, axes=(1, 0))
    start = panel.coeffs[0]
    free_nodes = spec.multiplier_from(xi_squared, panel.times - panel.start) * start
    remainder = panel.coeffs - free_nodes
    free_targets = spec.multiplier_from(xi_squared, targets - panel.start) * start
    return free_targets + np.tensordot(matrix, remainder, axes=(1, 0))


def duhamel_residual(traj: Trajectory, spec: PropagatorSpec, cfg: EvolveConfig) -> float:
    """
    sup_j ‖u(t_j) − U(t_j)u₀ − ∫₀^{t_j} K(t_j − τ) u(τ)^k dτ‖_{M^s_{p,q}},
    integrating each panel with 2Q nodes against the interpolated trajectory.
    """
    grid = traj.grid
    c0 = to_spectral(traj.u0).coeffs
    xi_squared = grid.frequency_norm_squared()
    kernel = duhamel_kernel(spec)
    nonlinearity = _Nonlinearity(grid, cfg.power_k, cfg.dealias_factor, cfg.nonlinear)
    norm = _NormProbe(grid, cfg)
    x, w = gauss_legendre(2 * cfg.quad_nodes)

    with np.errstate(over="ignore", invalid="ignore"):
        quadrature = []
        for panel in traj.panels:
            length = panel.end - panel.start
            taus = panel.start + (x + 1.0) * length / 2.0
            forcing = nonlinearity(_panel_interpolant(panel, spec, xi_squared, taus))
            quadrature.append((panel.end, taus, w * length / 2.0, forcing))

        worst = 0.0
        for t, state in zip(traj.times, traj.states):
            integral = np.zeros(grid.shape, dtype=np.complex128)
            for end, taus, weights, forcing in quadrature:
                if end > t + 1e-12 * max(1.0, abs(t)):
                    break
                factors = kernel.multiplier_from(xi_squared, t - taus)
                integral += np.einsum("a,a...->...", weights, factors * forcing)
            free = spec.multiplier_from(xi_squared, t) * c0
            residual = to_spectral(state).coeffs - free - integral
            worst = max(worst, norm(residual))
    return worst


def solve(u0: Operand, spec: PropagatorSpec, cfg: EvolveConfig, with_residual: bool = False) -> Trajectory:
    """Dispatch on cfg.mode; optionally attach the Duhamel residual to the diagnostics."""
    if cfg.mode == "etd-step":
        trajectory = etd_solve(u0, spec, cfg)
    else:
        trajectory = picard_solve(u0, spec, cfg)
    if with_residual and trajectory.diagnostics.status != "blowup":
        trajectory.diagnostics.residual = duhamel_residual(trajectory, spec, cfg)
    return trajectory
