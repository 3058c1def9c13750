"""
Sweep Service
=============
Phase diagrams over (s, 1/q): classifier verdicts on a grid, optionally
annotated with measured inflation exponents on a coarse subgrid.
"""

from typing import Optional

from core.logger import get_logger
from core.metrics import track_performance
from schemas.configs import InflationConfig, SweepConfig
from schemas.reports import SweepReport
from services.classifier import classify_grid
from services.probes import ProbeRunner, inflation_probe


class SweepService:
    """Builds phase-diagram rows and attaches probe measurements on request."""

    def __init__(self, runner: Optional[ProbeRunner] = None):
        self.runner = runner
        self.logger = get_logger()

    def run(self, cfg: SweepConfig) -> SweepReport:
        alpha = cfg.alpha if cfg.equation == "fractional-heat" else None
        rows = classify_grid(cfg.equation, cfg.n, cfg.k, cfg.s_values(), cfg.q_values, alpha)

        if cfg.measure:
            if cfg.equation != "fractional-heat":
                self.logger.warning(
                    "Measurements are only defined for the fractional heat equation",
                    context={"equation": cfg.equation},
                )
            else:
                for index, row in enumerate(rows):
                    if index % cfg.measure_stride:
                        continue
                    probe = InflationConfig(
                        case="one",
                        n=cfg.n,
                        k=cfg.k,
                        alpha=cfg.alpha,
                        s=row.s,
                        q=row.q,
                        N_list=cfg.measure_N_list,
                    )
                    report = inflation_probe(probe, runner=self.runner)
                    row.fitted_exponent = report.derived["inflation_exponent"]
                    row.predicted_exponent = report.derived["predicted_inflation_exponent"]
                    self.logger.debug(
                        "Sweep point measured",
                        context={"s": row.s, "q": row.q, "exponent": row.fitted_exponent},
                    )

        return SweepReport(equation=cfg.equation, rows=rows)


@track_performance("sweep")
def run_sweep(cfg: SweepConfig, runner: Optional[ProbeRunner] = None) -> SweepReport:
    """
    Classify every (s, q) of the sweep.

    Raises:
        ValidationError: invalid k, n or q values
    """
    return SweepService(runner).run(cfg)
