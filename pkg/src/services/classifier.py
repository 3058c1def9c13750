"""
Well-Posedness Classifier
=========================
Critical-exponent rules as a pure function of
(equation, n, k, α, s, q). Strict inequalities stay
strict, so every boundary point lands in the Gap.

    fractional-heat(α):  WellPosed  s ≥ 0 and σ > −α/(k−1)
                         IllPosed   σ < −α/(k−1) or s < −α/(k−1)
    schrodinger:         WellPosed  (s > 0 and σ > 0) or (s = 0 and σ ≥ 0)
                         IllPosed   σ < −2/(k−1) or s < −2/(k−1)
    klein-gordon:        WellPosed  s ≥ 0 and σ > −1/(k−1)
                         IllPosed   σ < −2/(k−1) or s < −2/(k−1)
    heat-iwabuchi:       WellPosed  σ > −2/(k−1)
                         IllPosed   s < −2/k or σ < −(n+2)/k
                         both hold  Gap, flagged as overlap
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import ValidationError
from core.validators import DimensionValidator, ExponentValidator, PositiveValidator, PowerValidator
from schemas.configs import sigma_value
from schemas.reports import SweepRow, Verdict

EQUATIONS = ("fractional-heat", "schrodinger", "klein-gordon", "heat-iwabuchi")

_CITATIONS = {
    ("fractional-heat", "WellPosed"): "Theorem 2",
    ("fractional-heat", "IllPosed"): "Theorem 3",
    ("fractional-heat", "Gap"): "Theorems 2-3",
    ("schrodinger", "WellPosed"): "Corollary 1",
    ("schrodinger", "IllPosed"): "Corollary 1",
    ("schrodinger", "Gap"): "Corollary 1",
    ("klein-gordon", "WellPosed"): "Corollary 2",
    ("klein-gordon", "IllPosed"): "Corollary 2",
    ("klein-gordon", "Gap"): "Corollary 2",
    ("heat-iwabuchi", "WellPosed"): "Theorem A",
    ("heat-iwabuchi", "IllPosed"): "Theorem A",
    ("heat-iwabuchi", "Gap"): "Theorem A",
}

_RULE_PREFIX = {
    "fractional-heat": "fractional-heat",
    "schrodinger": "schrodinger",
    "klein-gordon": "klein-gordon",
    "heat-iwabuchi": "iwabuchi",
}


def _validate(equation: str, n: int, k: int, alpha: Optional[float], q: float) -> None:
    if equation not in EQUATIONS:
        raise ValidationError("equation", f"unknown equation '{equation}', expected one of {EQUATIONS}")
    DimensionValidator.validate(n)
    PowerValidator.validate(k)
    ExponentValidator.validate_finite(q, "q")
    if equation == "fractional-heat":
        if alpha is None:
            raise ValidationError("alpha", "fractional-heat needs alpha > 0")
        PositiveValidator.validate(alpha, "alpha")


def thresholds(equation: str, n: int, k: int, alpha: Optional[float]) -> Dict[str, float]:
    """Critical values entering the rules of one equation."""
    if equation == "fractional-heat":
        return {"critical": -alpha / (k - 1)}
    if equation in ("schrodinger", "klein-gordon"):
        wellposed = 0.0 if equation == "schrodinger" else -1.0 / (k - 1)
        return {"wellposed": wellposed, "illposed": -2.0 / (k - 1)}
    return {"wellposed": -2.0 / (k - 1), "illposed_s": -2.0 / k, "illposed_sigma": -(n + 2.0) / k}


def regions(
    equation: str,
    n: int,
    k: int,
    alpha: Optional[float],
    s: np.ndarray,
    sigma: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Boolean (wellposed, illposed) masks; works on scalars and arrays alike."""
    s = np.asarray(s, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    limits = thresholds(equation, n, k, alpha)

    if equation == "fractional-heat":
        critical = limits["critical"]
        wellposed = (s >= 0.0) & (sigma > critical)
        illposed = (sigma < critical) | (s < critical)
    elif equation == "schrodinger":
        wellposed = ((s > 0.0) & (sigma > 0.0)) | ((s == 0.0) & (sigma >= 0.0))
        illposed = (sigma < limits["illposed"]) | (s < limits["illposed"])
    elif equation == "klein-gordon":
        wellposed = (s >= 0.0) & (sigma > limits["wellposed"])
        illposed = (sigma < limits["illposed"]) | (s < limits["illposed"])
    else:
        wellposed = sigma > limits["wellposed"]
        illposed = (s < limits["illposed_s"]) | (sigma < limits["illposed_sigma"])
    return wellposed, illposed


def _describe(equation: str, status: str, overlap: bool, s: float, sigma: float, limits: Dict[str, float]) -> Tuple[str, str]:
    """Rule name and threshold arithmetic for one point."""
    prefix = _RULE_PREFIX[equation]
    if overlap:
        return (
            "iwabuchi-overlap",
            f"σ={sigma:.2f} > {limits['wellposed']:.2f} and ill-posedness condition also holds "
            f"(s={s:.2f} vs {limits['illposed_s']:.2f}, σ vs {limits['illposed_sigma']:.2f})",
        )

    if equation == "fractional-heat":
        critical = limits["critical"]
        if status == "WellPosed":
            return f"{prefix}-wellposed", f"σ={sigma:.2f} > {critical:.2f}"
        if status == "IllPosed":
            if sigma < critical:
                return f"{prefix}-illposed", f"σ={sigma:.2f} < {critical:.2f}"
            return f"{prefix}-illposed", f"s={s:.2f} < {critical:.2f}"
        return f"{prefix}-gap", f"σ={sigma:.2f}, s={s:.2f} against {critical:.2f}"

    if equation in ("schrodinger", "klein-gordon"):
        if status == "WellPosed":
            relation = ">=" if equation == "schrodinger" and s == 0.0 else ">"
            return f"{prefix}-wellposed", f"σ={sigma:.2f} {relation} {limits['wellposed']:.2f}, s={s:.2f}"
        if status == "IllPosed":
            value, name = (sigma, "σ") if sigma < limits["illposed"] else (s, "s")
            return f"{prefix}-illposed", f"{name}={value:.2f} < {limits['illposed']:.2f}"
        return (
            f"{prefix}-gap",
            f"σ={sigma:.2f} in [{limits['illposed']:.2f}, {limits['wellposed']:.2f}] interval",
        )

    if status == "WellPosed":
        return f"{prefix}-wellposed", f"σ={sigma:.2f} > {limits['wellposed']:.2f}"
    if status == "IllPosed":
        if s < limits["illposed_s"]:
            return f"{prefix}-illposed", f"s={s:.2f} < {limits['illposed_s']:.2f}"
        return f"{prefix}-illposed", f"σ={sigma:.2f} < {limits['illposed_sigma']:.2f}"
    return f"{prefix}-gap", f"σ={sigma:.2f}, s={s:.2f}"


def _status(wellposed: bool, illposed: bool) -> Tuple[str, bool]:
    if wellposed and illposed:
        return "Gap", True
    if wellposed:
        return "WellPosed", False
    if illposed:
        return "IllPosed", False
    return "Gap", False


def classify(
    equation: str,
    n: int,
    k: int,
    s: float,
    q: float,
    alpha: Optional[float] = None,
) -> Verdict:
    """
    Classify one parameter point.

    Raises:
        ValidationError: unknown equation, k < 2, q outside [1, inf), alpha <= 0
    """
    _validate(equation, n, k, alpha, q)
    sigma = sigma_value(s, q, n)
    wellposed, illposed = regions(equation, n, k, alpha, s, sigma)
    status, overlap = _status(bool(wellposed), bool(illposed))
    limits = thresholds(equation, n, k, alpha)
    rule, detail = _describe(equation, status, overlap, s, sigma, limits)
    return Verdict(
        status=status,
        equation=equation,
        rule=rule,
        sigma=sigma,
        thresholds=limits,
        detail=detail,
        overlap=overlap,
        citation=_CITATIONS[(equation, status)],
    )


def classify_grid(
    equation: str,
    n: int,
    k: int,
    s_values: Sequence[float],
    q_values: Sequence[float],
    alpha: Optional[float] = None,
) -> List[SweepRow]:
    """Classify every (s, q) pair; rows ordered by q, then s."""
    for q in q_values:
        _validate(equation, n, k, alpha, q)
    s_grid, q_grid = np.meshgrid(np.asarray(s_values, float), np.asarray(q_values, float))
    sigma = s_grid - n * (1.0 - 1.0 / q_grid)
    wellposed, illposed = regions(equation, n, k, alpha, s_grid, sigma)
    limits = thresholds(equation, n, k, alpha)

    rows = []
    for index in np.ndindex(s_grid.shape):
        status, overlap = _status(bool(wellposed[index]), bool(illposed[index]))
        rule, _ = _describe(equation, status, overlap, float(s_grid[index]), float(sigma[index]), limits)
        rows.append(SweepRow(
            s=float(s_grid[index]),
            q=float(q_grid[index]),
            inv_q=1.0 / float(q_grid[index]),
            sigma=float(sigma[index]),
            status=status,
            rule=rule,
            overlap=overlap,
        ))
    return rows
