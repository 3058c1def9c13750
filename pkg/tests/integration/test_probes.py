"""
Integration Tests for Probes
============================
End-to-end probe runs with their default configurations: norm inflation,
smoothing rates, product estimates, the Bessel isomorphism and per-box
decay. These exercise fields, decompositions, propagators, the Duhamel
quadrature and the slope fits together.
"""

import itertools
import math

import pytest

from core.exceptions import ProbeError
from core.grid import make_grid
from core.field import single_mode, to_spectral
from schemas.configs import (
    DecayConfig,
    InflationConfig,
    IsomorphismConfig,
    ProductConfig,
    SmoothingConfig,
)
from services.cache_service import ProbeCache
from services.dealias import pow_dealiased
from services.probes import (
    ProbeRunner,
    build_inflation_data,
    decay_probe,
    inflation_probe,
    isomorphism_probe,
    predicted_inflation_slopes,
    product_probe,
    product_ratio,
    smoothing_probe,
)


@pytest.mark.slow
class TestInflationProbe:
    """Test the norm-inflation probe of the fractional heat flow."""

    def test_case_one(self):
        """Test n=1, k=2, α=1, s=−1.5, q=2 over N ∈ {8, 16, 32, 64}."""
        report = inflation_probe(InflationConfig(case="one", s=-1.5, q=2.0))
        assert report.derived["input_slope"] == pytest.approx(-1.5, abs=0.1)
        assert report.derived["output_slope"] == pytest.approx(-2.5, abs=0.15)
        assert report.derived["inflation_exponent"] == pytest.approx(0.5, abs=0.2)
        assert report.derived["inflation_exponent"] > 0.0
        assert report.verdict == "ConsistentWithPaper"

    def test_case_two(self):
        """Test s=−0.5, q=4, sep=4: the spread-out data."""
        report = inflation_probe(InflationConfig(case="two", s=-0.5, q=4.0, sep=4))
        assert report.derived["input_slope"] == pytest.approx(-0.25, abs=0.1)
        assert report.derived["output_slope"] == pytest.approx(-0.25, abs=0.15)
        assert report.derived["inflation_exponent"] == pytest.approx(0.25, abs=0.2)
        assert report.derived["inflation_exponent"] > 0.0
        assert report.verdict == "ConsistentWithPaper"

    def test_wellposed_control(self):
        """Test s=0.5, q=2: the ratio decays."""
        report = inflation_probe(InflationConfig(case="one", s=0.5, q=2.0))
        assert report.derived["inflation_exponent"] == pytest.approx(-1.5, abs=0.2)
        assert report.derived["inflation_exponent"] < 0.0
        assert report.verdict == "ConsistentWithPaper"

    def test_report_contents(self):
        report = inflation_probe(InflationConfig(N_list=[8, 16, 32]))
        assert [point.value for point in report.points] == [8.0, 16.0, 32.0]
        assert [check.name for check in report.checks] == ["input", "output", "exponent"]
        assert report.series("t") == pytest.approx([1 / 8, 1 / 16, 1 / 32])
        assert "total_output_slope" in report.derived
        assert report.derived["sigma"] == pytest.approx(-2.0)


class TestInflationData:
    """Test the inflation data and predictions."""

    def test_case_one_support(self):
        cfg = InflationConfig(case="one")
        u0 = build_inflation_data(cfg, 8)
        spectrum = to_spectral(u0)
        assert spectrum.coefficient([8]) == pytest.approx(1.0)
        assert spectrum.coefficient([-9]) == pytest.approx(1.0)
        assert abs(spectrum.coefficient([10])) <= 1e-12
        assert abs(u0.samples.imag).max() <= 1e-12

    @pytest.mark.parametrize("k", [2, 3])
    def test_case_one_power_support_is_sumset(self, k):
        cfg = InflationConfig(case="one", k=k)
        u0 = build_inflation_data(cfg, 8)
        support = list(range(7, 10)) + list(range(-9, -6))
        sumset = {sum(terms) for terms in itertools.product(support, repeat=k)}
        power = to_spectral(pow_dealiased(u0, k, cfg.dealias_factor))
        half = power.grid.M // 2
        nonzero = {m for m in range(-half, half) if abs(power.coefficient([m])) > 1e-9}
        assert nonzero == sumset

    def test_case_two_support(self):
        cfg = InflationConfig(case="two", k=2, sep=4, s=-0.5, q=4.0)
        spectrum = to_spectral(build_inflation_data(cfg, 4))
        half = spectrum.grid.M // 2
        ones = set(range(28, 37)) | set(range(-36, -27))
        for m in range(-half, half):
            expected = 1.0 if m in ones else 0.0
            assert abs(spectrum.coefficient([m]) - expected) <= 1e-12

    def test_predicted_slopes(self):
        assert predicted_inflation_slopes(InflationConfig(case="one", s=-1.5, q=2.0)) == {
            "input": -1.5,
            "output": -2.5,
            "exponent": 0.5,
        }
        two = predicted_inflation_slopes(InflationConfig(case="two", s=-0.5, q=4.0))
        assert two["exponent"] == pytest.approx(0.25)

    def test_too_few_points(self):
        with pytest.raises(ProbeError):
            inflation_probe(InflationConfig(N_list=[8, 16]))


@pytest.mark.slow
class TestSmoothingProbe:
    """Test r(t) = max_N ‖U(t)f_N‖_{M^{s1}} / ‖f_N‖_{M^{s2}}."""

    @pytest.mark.parametrize("alpha, s1, expected", [(1.0, 1.0, -1.0), (2.0, 1.0, -0.5), (1.0, 2.0, -2.0)])
    def test_rate(self, alpha, s1, expected):
        report = smoothing_probe(SmoothingConfig(alpha=alpha, s1=s1, s2=0.0))
        assert report.fitted_slope == pytest.approx(expected, abs=0.1)
        assert report.verdict == "ConsistentWithPaper"

    def test_no_smoothing_needed(self):
        report = smoothing_probe(SmoothingConfig(s1=0.0, s2=0.0))
        assert abs(report.fitted_slope) <= 0.05
        assert max(report.series("ratio")) <= 1.0 + 1e-12


class TestSmoothingValidation:
    """Test smoothing configurations."""

    def test_small_family_rejected(self):
        with pytest.raises(ProbeError):
            smoothing_probe(SmoothingConfig(family=[2, 3]))

    def test_unitary_flow_does_not_smooth(self):
        report = smoothing_probe(SmoothingConfig(kind="schrodinger", s1=0.0, s2=0.0, family=[2, 4, 8, 16]))
        assert report.predicted_slope == 0.0
        assert report.fitted_slope == pytest.approx(0.0, abs=1e-10)


class TestProductProbe:
    """Test the product and power estimates."""

    def test_single_mode_ratio(self):
        """Test one-box arithmetic: the ratio is 1/√(2π) on every grid."""
        cfg = ProductConfig()
        for M in (32, 128):
            u = to_spectral(single_mode(make_grid(1, 1, M), 5))
            assert product_ratio(cfg, u) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-12)

    @pytest.mark.slow
    def test_product_estimate_flat(self):
        report = product_probe(ProductConfig(), seed=0)
        assert math.isfinite(report.derived["max_ratio"])
        assert report.fitted_slope == pytest.approx(0.0, abs=0.1)
        assert report.verdict == "ConsistentWithPaper"

    @pytest.mark.slow
    def test_power_estimate_flat(self):
        cfg = ProductConfig(estimate="power", s1=1.0, q1=1.0, s2=0.0, q2=1.0)
        report = product_probe(cfg, seed=0)
        assert report.fitted_slope == pytest.approx(0.0, abs=0.1)

    def test_exponent_relation_enforced(self):
        with pytest.raises(ValueError):
            ProductConfig(q=2.0, q1=1.0, q2=1.0)

    def test_deterministic_for_seed(self):
        cfg = ProductConfig(bands=[4, 8, 16], ensemble_size=6)
        first = product_probe(cfg, seed=7)
        second = product_probe(cfg, seed=7, runner=ProbeRunner(threads=3))
        assert first.series("max_ratio") == second.series("max_ratio")


class TestIsomorphismProbe:
    """Test ‖J_σ f_N‖_{M^{s−σ}} / ‖f_N‖_{M^s}."""

    def test_ratio_is_one(self):
        report = isomorphism_probe(IsomorphismConfig(sigma=2.0, s=0.5))
        assert report.series("ratio") == pytest.approx([1.0] * 6, rel=1e-12)
        assert report.fitted_slope == pytest.approx(0.0, abs=1e-10)
        assert report.verdict == "ConsistentWithPaper"

    def test_two_dimensional(self):
        report = isomorphism_probe(IsomorphismConfig(sigma=-1.0, n=2, N_list=[2, 4, 8]))
        assert report.verdict == "ConsistentWithPaper"


class TestDecayProbe:
    """Test the per-box decay probe."""

    @pytest.mark.parametrize("alpha", [1.0, 2.0])
    def test_bound_holds(self, alpha):
        report = decay_probe(DecayConfig(alpha=alpha), seed=0)
        assert report.check("bound-excess").fitted <= 1e-10
        assert report.verdict == "ConsistentWithPaper"
        assert len(report.points) == 6


class TestProbeRunner:
    """Test the worker pool and the cache."""

    def test_threads_keep_order(self):
        cfg = IsomorphismConfig()
        serial = isomorphism_probe(cfg, runner=ProbeRunner(threads=1))
        pooled = isomorphism_probe(cfg, runner=ProbeRunner(threads=4))
        assert [p.model_dump() for p in serial.points] == [p.model_dump() for p in pooled.points]

    def test_cache_reuses_points(self, tmp_path):
        cache = ProbeCache(cache_dir=str(tmp_path / "cache"))
        runner = ProbeRunner(threads=1, cache=cache)
        cfg = DecayConfig(k_list=[2, 4, 8], t_list=[0.1], ensemble_size=2)
        first = decay_probe(cfg, seed=1, runner=runner)
        second = decay_probe(cfg, seed=1, runner=runner)
        assert cache.stats()["misses"] == 3
        assert cache.stats()["hits"] == 3
        assert first.points == second.points
        cache.close()
