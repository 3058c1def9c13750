"""
Unit Tests for Propagators
==========================
Multipliers, the semigroup law, Schrödinger conservation, the free
Klein–Gordon flow and per-box decay of the fractional heat semigroup.
"""

import math

import numpy as np
import pytest

from core.exceptions import PropagatorError, ValidationError
from core.field import constant_field, zero_field
from core.grid import make_grid
from schemas.configs import ModulationParams
from services.modulation import modulation_norm
from services.propagator import (
    box_decay_check,
    duhamel_kernel,
    kg_free_evolution,
    make_propagator,
    multiplier_table,
    propagate,
)


@pytest.fixture
def heat():
    return make_propagator("fractional-heat", 1.0)


@pytest.fixture
def schrodinger():
    return make_propagator("schrodinger")


class TestPropagatorSpec:
    """Test construction and symbol invariants."""

    def test_smoothing_index(self, heat, schrodinger):
        assert heat.theta == 1.0
        assert make_propagator("fractional-heat", 0.5).theta == 2.0
        assert schrodinger.theta == 0.0
        assert make_propagator("kg-cos").theta == 0.0

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            make_propagator("wave")

    @pytest.mark.parametrize("alpha", [None, 0.0, -2.0])
    def test_heat_needs_positive_alpha(self, alpha):
        with pytest.raises(ValidationError):
            make_propagator("fractional-heat", alpha)

    def test_symbol_bounds(self, heat, schrodinger):
        grid = make_grid(2, 2, 32)
        for t in (0.0, 0.3, 2.0):
            assert np.all(np.abs(heat.multiplier(grid, t)) <= 1.0)
            assert np.max(np.abs(np.abs(schrodinger.multiplier(grid, t)) - 1.0)) <= 1e-14
            assert np.all(np.abs(make_propagator("kg-cos").multiplier(grid, t)) <= 1.0)
            assert np.all(np.abs(make_propagator("kg-sinc").multiplier(grid, t)) <= 1.0)
        xi_squared = grid.frequency_norm_squared()
        assert np.all(heat.symbol(xi_squared).real <= 0.0)

    def test_klein_gordon_has_no_symbol(self):
        spec = make_propagator("kg-cos")
        assert not spec.has_symbol
        with pytest.raises(PropagatorError):
            spec.symbol(np.zeros(4))

    def test_duhamel_kernel(self, heat):
        assert duhamel_kernel(heat) == heat
        assert duhamel_kernel(make_propagator("kg-cos")).kind == "kg-sinc"


class TestPropagate:
    """Test U(t)f."""

    def test_heat_single_mode(self, mode3, heat):
        result = propagate(mode3, heat, 0.5)
        assert np.max(np.abs(result.samples - math.exp(-1.5) * mode3.samples)) <= 1e-12

    @pytest.mark.parametrize("kind, alpha", [("fractional-heat", 1.5), ("schrodinger", None), ("kg-cos", None)])
    def test_time_zero_identity(self, kind, alpha, band_limited, rng, grid64):
        f = band_limited(grid64, 20, rng)
        result = propagate(f, make_propagator(kind, alpha), 0.0)
        assert np.max(np.abs(result.samples - f.samples)) <= 1e-12

    def test_sinc_at_time_zero(self, mode3):
        result = propagate(mode3, make_propagator("kg-sinc"), 0.0)
        assert np.max(np.abs(result.samples)) == 0.0

    def test_negative_time_heat(self, mode3, heat):
        with pytest.raises(PropagatorError):
            propagate(mode3, heat, -0.1)

    def test_negative_time_schrodinger(self, band_limited, rng, grid64, schrodinger, relative_error):
        f = band_limited(grid64, 20, rng)
        back = propagate(propagate(f, schrodinger, -0.7), schrodinger, 0.7)
        assert relative_error(back.samples, f.samples) <= 1e-12

    @pytest.mark.parametrize("kind, alpha", [("fractional-heat", 1.0), ("fractional-heat", 0.5), ("schrodinger", None)])
    def test_semigroup_law(self, kind, alpha, band_limited, rng, relative_error):
        grid = make_grid(2, 1, 32)
        f = band_limited(grid, 6, rng)
        spec = make_propagator(kind, alpha)
        stepped = propagate(propagate(f, spec, 0.15), spec, 0.35)
        direct = propagate(f, spec, 0.5)
        assert relative_error(stepped.samples, direct.samples) <= 1e-12

    @pytest.mark.parametrize("s, q", [(0.0, 2.0), (1.5, 1.0), (-2.0, 4.0), (0.5, math.inf)])
    def test_schrodinger_conserves_norm(self, s, q, band_limited, rng, grid64, schrodinger):
        f = band_limited(grid64, 25, rng)
        mp = ModulationParams(s=s, p=2, q=q)
        before = modulation_norm(f, mp)
        after = modulation_norm(propagate(f, schrodinger, 3.0), mp)
        assert after == pytest.approx(before, rel=1e-12)

    def test_heat_contracts_norm(self, band_limited, rng, grid64, heat):
        f = band_limited(grid64, 25, rng)
        mp = ModulationParams(s=1.0, p=2, q=1)
        assert modulation_norm(propagate(f, heat, 0.2), mp) <= modulation_norm(f, mp)

    def test_multiplier_table(self, grid16, heat):
        rows = multiplier_table(heat, grid16, 0.5)
        assert len(rows) == 16
        assert rows[0] == ((0.0,), 1.0 + 0j)
        assert rows[3][0] == (3.0,)
        assert rows[3][1] == pytest.approx(math.exp(-1.5))


class TestKleinGordon:
    """Test the free Klein–Gordon flow."""

    def test_constant_mode_at_pi(self, grid16):
        result = kg_free_evolution(constant_field(grid16, 1.0), zero_field(grid16), math.pi)
        assert np.max(np.abs(result.samples + 1.0)) <= 1e-12

    def test_zero_data_at_time_zero(self, grid16, mode3):
        result = kg_free_evolution(zero_field(grid16), mode3, 0.0)
        assert np.max(np.abs(result.samples)) == 0.0

    def test_cosine_part(self, mode3, grid16):
        t = 0.8
        result = kg_free_evolution(mode3, zero_field(grid16), t)
        expected = math.cos(t * math.sqrt(10.0)) * mode3.samples
        assert np.max(np.abs(result.samples - expected)) <= 1e-12

    def test_sine_part(self, mode3, grid16):
        t = 0.8
        result = kg_free_evolution(zero_field(grid16), mode3, t)
        expected = math.sin(t * math.sqrt(10.0)) / math.sqrt(10.0) * mode3.samples
        assert np.max(np.abs(result.samples - expected)) <= 1e-12


class TestBoxDecay:
    """Test ‖□_k U(t)f‖₂ / ‖□_k f‖₂ against exp(−t(|k| − √n)^α)."""

    def test_first_order_decay(self, heat):
        result = box_decay_check(heat, 10, 0.1, seed=3)
        assert result.bound == pytest.approx(math.exp(-0.9))
        assert result.measured <= math.exp(-0.9) + 1e-10
        assert result.within_bound

    def test_second_order_decay(self):
        spec = make_propagator("fractional-heat", 2.0)
        result = box_decay_check(spec, 10, 0.1, seed=3)
        assert result.measured <= math.exp(-0.1 * 81) + 1e-10

    def test_time_zero(self, heat):
        result = box_decay_check(heat, 4, 0.0, seed=3)
        assert result.bound == 1.0
        assert result.measured == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("k", [(2, 0), (5, -3), (-8, 8)])
    def test_two_dimensional_boxes(self, heat, k):
        assert box_decay_check(heat, k, 0.05, ensemble_size=8, seed=11).within_bound

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha", [1.0, 2.0])
    @pytest.mark.parametrize("t", [0.01, 0.1, 1.0])
    def test_every_box_up_to_64(self, alpha, t):
        spec = make_propagator("fractional-heat", alpha)
        for k in range(2, 65):
            for index in (k, -k):
                result = box_decay_check(spec, index, t, ensemble_size=4, seed=k)
                assert result.measured <= math.exp(-t * (k - 1) ** alpha) * (1.0 + 1e-10)

    def test_operator_norm_below_bound(self, heat):
        result = box_decay_check(heat, 16, 0.2, ensemble_size=4, seed=1)
        assert result.measured <= result.operator_norm + 1e-12
        assert result.operator_norm <= result.bound

    def test_other_exponent_runs(self, heat):
        result = box_decay_check(heat, 6, 0.1, ensemble_size=4, seed=2, p=4.0)
        assert 0.0 < result.measured < 1.0

    @pytest.mark.parametrize("k", [0, 1, (1, -1)])
    def test_low_boxes_rejected(self, heat, k):
        with pytest.raises(ValidationError):
            box_decay_check(heat, k, 0.1)

    def test_unitary_rejected(self, schrodinger):
        with pytest.raises(ValidationError):
            box_decay_check(schrodinger, 4, 0.1)

    def test_negative_time_rejected(self, heat):
        with pytest.raises(ValidationError):
            box_decay_check(heat, 4, -1.0)
