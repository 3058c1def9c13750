"""
Integration Tests for Sweeps
============================
Phase diagrams from the classifier, with and without measured exponents.
"""

import pytest

from schemas.configs import SweepConfig
from services.probes import ProbeRunner
from services.sweep_service import SweepService, run_sweep


class TestSweep:
    """Test phase-diagram sweeps."""

    def test_three_bands(self):
        report = run_sweep(SweepConfig(s_min=-3.0, s_max=1.0, s_points=41, q_values=[1.0, 2.0, 4.0]))
        assert len(report.rows) == 123
        assert {row.status for row in report.rows} == {"WellPosed", "IllPosed", "Gap"}
        assert [row.q for row in report.rows[:41]] == [1.0] * 41

    def test_band_boundaries(self):
        """Test that well-posed rows have s >= 0 and σ > −1, ill-posed rows min(s, σ) < −1."""
        report = run_sweep(SweepConfig())
        for row in report.rows:
            if row.status == "WellPosed":
                assert row.s >= 0.0 and row.sigma > -1.0
            elif row.status == "IllPosed":
                assert min(row.s, row.sigma) < -1.0
            else:
                assert min(row.s, row.sigma) >= -1.0

    def test_single_point(self):
        report = run_sweep(SweepConfig(s_min=0.2, s_max=0.2, s_points=1, q_values=[2.0]))
        assert len(report.rows) == 1
        assert report.rows[0].status == "WellPosed"
        assert report.rows[0].inv_q == pytest.approx(0.5)

    def test_no_measurements_by_default(self):
        report = run_sweep(SweepConfig(s_points=5))
        assert all(row.fitted_exponent is None for row in report.rows)

    def test_empty_range(self):
        with pytest.raises(ValueError):
            SweepConfig(s_min=1.0, s_max=-1.0)

    def test_other_equations(self):
        report = run_sweep(SweepConfig(equation="schrodinger", k=3, s_points=9, q_values=[2.0]))
        assert report.equation == "schrodinger"
        assert len(report.rows) == 9


class TestMeasuredSweep:
    """Test --measure rows."""

    def test_ill_posed_point(self):
        cfg = SweepConfig(s_min=-1.5, s_max=-1.5, s_points=1, q_values=[2.0], measure=True,
                          measure_N_list=[8, 16, 32])
        row = SweepService(ProbeRunner(threads=1)).run(cfg).rows[0]
        assert row.status == "IllPosed"
        assert row.predicted_exponent == pytest.approx(0.5)
        assert row.fitted_exponent == pytest.approx(0.5, abs=0.25)

    def test_stride(self):
        cfg = SweepConfig(s_min=-2.0, s_max=-1.5, s_points=3, q_values=[2.0], measure=True,
                          measure_stride=2, measure_N_list=[4, 8, 16])
        rows = run_sweep(cfg).rows
        assert [row.fitted_exponent is not None for row in rows] == [True, False, True]

    def test_measure_ignored_off_heat(self):
        cfg = SweepConfig(equation="schrodinger", s_points=3, q_values=[2.0], measure=True)
        assert all(row.fitted_exponent is None for row in run_sweep(cfg).rows)
