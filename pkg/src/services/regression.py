"""
Slope Regression
================
Least-squares lines through (log x, log y) used to read off power-law rates.
"""

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy import stats

from core.exceptions import RegressionError

MIN_POINTS = 3


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    stderr: float
    intercept: float
    count: int


def fit_slope(points: Iterable[Tuple[float, float]], log_log: bool = True) -> SlopeFit:
    """
    Fit y ≈ intercept + slope·x (on logarithms when log_log).

    Raises:
        RegressionError: fewer than three points, nonpositive values on a
            log–log fit, non-finite values or identical abscissae
    """
    data = np.asarray(list(points), dtype=float)
    if data.ndim != 2 or data.shape[0] < MIN_POINTS or data.shape[1] != 2:
        raise RegressionError(f"need at least {MIN_POINTS} (x, y) points, got {len(data)}")
    x, y = data[:, 0], data[:, 1]
    if log_log:
        if np.any(x <= 0.0) or np.any(y <= 0.0):
            raise RegressionError("log-log fit needs positive abscissae and values")
        x, y = np.log(x), np.log(y)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise RegressionError("non-finite values in slope fit")
    if np.ptp(x) == 0.0:
        raise RegressionError("degenerate abscissae: all x values are equal")

    result = stats.linregress(x, y)
    stderr = float(result.stderr) if np.isfinite(result.stderr) else 0.0
    return SlopeFit(
        slope=float(result.slope),
        stderr=stderr,
        intercept=float(result.intercept),
        count=int(len(x)),
    )
