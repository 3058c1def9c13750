"""
Integration Tests for the Solver Pipeline
=========================================
Field files through the solver, the Picard contraction on small data, and
the identity between the inflation witness and the first Picard correction.
"""

import numpy as np
import pytest

from core.field import constant_field, lp_norm, random_band_limited, to_spectral
from core.grid import make_grid
from schemas.configs import EvolveConfig, InflationConfig, ModulationParams
from services.field_file_service import load_field, save_field
from services.modulation import modulation_norm
from services.probes import inflation_witness
from services.propagator import make_propagator
from services.solver import picard_iterates, solve


@pytest.fixture
def heat():
    return make_propagator("fractional-heat", 1.0)


class TestWitnessIdentity:
    """Test that the probe witness is the first Picard correction."""

    @pytest.mark.parametrize("case", ["one", "two"])
    def test_first_correction(self, heat, case):
        cfg = InflationConfig(case=case, s=-1.5 if case == "one" else -0.5, q=2.0 if case == "one" else 4.0)
        u0, witness, t = inflation_witness(cfg, 8)
        evolve_cfg = EvolveConfig(
            T=t,
            time_nodes=2,
            quad_nodes=cfg.quad_nodes,
            power_k=cfg.k,
            dealias_factor=cfg.dealias_factor,
        )
        iterates = picard_iterates(u0, heat, evolve_cfg, 1)
        correction = iterates[1][-1].samples - iterates[0][-1].samples
        assert np.max(np.abs(correction - witness.samples)) <= 1e-10

    def test_witness_is_not_trivial(self):
        _, witness, t = inflation_witness(InflationConfig(), 8)
        assert t == pytest.approx(1 / 8)
        assert lp_norm(witness, 2.0) > 1e-3


class TestContraction:
    """Test the Picard iteration on small data."""

    def _run(self, heat, T):
        grid = make_grid(1, 1, 32)
        rng = np.random.default_rng(3)
        u0 = random_band_limited(grid, 4, rng).scale(0.01)
        cfg = EvolveConfig(T=T, time_nodes=5, quad_nodes=12, picard_tol=1e-12)
        return solve(u0, heat, cfg)

    def test_geometric_decrease(self, heat):
        trajectory = self._run(heat, 0.5)
        diagnostics = trajectory.diagnostics
        assert diagnostics.status == "converged"
        assert len(diagnostics.differences) >= 3
        assert all(b < a for a, b in zip(diagnostics.differences, diagnostics.differences[1:]))
        assert diagnostics.contraction_factor < 0.5

    def test_halving_time_contracts_faster(self, heat):
        factors = [self._run(heat, T).diagnostics.contraction_factor for T in (1.0, 0.5, 0.25)]
        assert all(b < a for a, b in zip(factors, factors[1:]))


class TestFieldFilePipeline:
    """Test a saved field evolved and measured along the trajectory."""

    def test_riccati_from_file(self, tmp_path, heat):
        path = save_field(constant_field(make_grid(1, 1, 16), 0.1), tmp_path / "u0.json")
        u0 = load_field(path)
        trajectory = solve(u0, heat, EvolveConfig(T=1.0), with_residual=True)
        assert trajectory.diagnostics.status == "converged"
        assert np.max(np.abs(trajectory.final.samples - 1.0 / 9.0)) <= 1e-6
        assert trajectory.diagnostics.residual <= 10 * EvolveConfig().picard_tol

    def test_states_round_trip_through_files(self, tmp_path, heat):
        u0 = constant_field(make_grid(1, 1, 16), 0.1)
        trajectory = solve(u0, heat, EvolveConfig(T=0.5, time_nodes=3))
        saved = save_field(trajectory.final, tmp_path / "final.json")
        reloaded = load_field(saved)
        assert np.array_equal(reloaded.samples, trajectory.final.samples)

    def test_linear_heat_norms_decrease(self, heat):
        grid = make_grid(1, 1, 64)
        u0 = random_band_limited(grid, 12, np.random.default_rng(8))
        trajectory = solve(u0, heat, EvolveConfig(T=1.0, nonlinear=False))
        norms = trajectory.norms(ModulationParams(s=0.5, q=1.0))
        assert trajectory.diagnostics.status == "linear"
        assert all(b <= a for a, b in zip(norms, norms[1:]))
        assert norms[0] == pytest.approx(modulation_norm(u0, ModulationParams(s=0.5, q=1.0)))

    def test_schrodinger_modes_keep_modulus(self):
        grid = make_grid(1, 1, 64)
        u0 = random_band_limited(grid, 12, np.random.default_rng(9))
        trajectory = solve(u0, make_propagator("schrodinger"), EvolveConfig(T=2.0, nonlinear=False))
        start = np.abs(to_spectral(u0).coeffs)
        end = np.abs(to_spectral(trajectory.final).coeffs)
        assert np.max(np.abs(end - start)) <= 1e-12
