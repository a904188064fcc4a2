"""
Power Law
Single-regime least-squares fits in log-log space for the three laws:

    rank-frequency         f  ~ i^(-alpha)
    meaning distribution   mu ~ i^(-gamma)
    meaning-frequency      mu ~ f^(delta)

and the exponent relation delta' = gamma / alpha.

Logs are natural logs; intercepts are reported on that scale. The exponent
does not depend on the log base.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
from scipy.stats import linregress

from zipflaws.errors import DegenerateFitError, FitDomainError

REPORT_DIGITS = 6


class Law(str, Enum):
    RANK_FREQUENCY = "rank_frequency"
    MEANING_DISTRIBUTION = "meaning_distribution"
    MEANING_FREQUENCY = "meaning_frequency"

    @property
    def symbol(self) -> str:
        return {"rank_frequency": "alpha", "meaning_distribution": "gamma", "meaning_frequency": "delta"}[self.value]


class LawSeries(Protocol):
    """Anything exposing aligned rank, frequency and sense columns (raw or binned)"""

    bin_size: Optional[int]

    @property
    def rank_values(self) -> np.ndarray: ...

    @property
    def frequency_values(self) -> np.ndarray: ...

    @property
    def sense_values(self) -> np.ndarray: ...


@dataclass(frozen=True)
class LineFit:
    """Ordinary least-squares line through (ln x, ln y)"""

    slope: float
    intercept: float
    r_squared: float
    sse_log: float
    n_points: int


@dataclass(frozen=True)
class PowerLawFit:
    law: Law
    exponent: float
    log_intercept: float
    r_squared: float
    sse_log: float
    n_points: int
    bin_size: Optional[int] = None

    def to_report(self) -> Dict[str, Any]:
        return {
            "law": self.law.value,
            "exponent": round_significant(self.exponent),
            "intercept": round_significant(self.log_intercept),
            "r_squared": round_significant(self.r_squared),
            "sse_log": round_significant(self.sse_log),
            "n_points": self.n_points,
            "bin_size": self.bin_size,
        }


Points = Union[Sequence[Tuple[float, float]], np.ndarray]


def fit_loglog(points: Points) -> LineFit:
    """
    Least-squares line through the log-transformed points.

    All coordinates must be strictly positive and at least two x values
    must differ.
    """
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise FitDomainError("points must be a sequence of (x, y) pairs")
    return fit_log_arrays(data[:, 0], data[:, 1])


def fit_log_arrays(x: np.ndarray, y: np.ndarray, segment: Optional[str] = None) -> LineFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise FitDomainError("x and y must have the same length")
    if len(x) < 2:
        raise DegenerateFitError(f"need at least 2 points, got {len(x)}", segment)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitDomainError("coordinates must be finite")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitDomainError("log-log fit needs strictly positive coordinates; a zero frequency or sense count means corrupted input")
    return line_fit(np.log(x), np.log(y), segment)


def line_fit(log_x: np.ndarray, log_y: np.ndarray, segment: Optional[str] = None) -> LineFit:
    if np.all(log_x == log_x[0]):
        raise DegenerateFitError("all x values are equal; the slope is undefined", segment)
    result = linregress(log_x, log_y)
    slope = float(result.slope)
    intercept = float(result.intercept)
    residuals = log_y - (intercept + slope * log_x)
    sse = float(np.dot(residuals, residuals))
    centred = log_y - log_y.mean()
    sst = float(np.dot(centred, centred))
    # Constant y is fitted perfectly by a flat line.
    if sst <= np.finfo(float).eps * max(1.0, float(np.dot(log_y, log_y))):
        r_squared = 1.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - sse / sst))
    return LineFit(slope, intercept, r_squared, sse, len(log_x))


def fit_rank_frequency(series: LawSeries) -> PowerLawFit:
    """alpha = -slope of log frequency against log rank"""
    line = fit_log_arrays(series.rank_values, series.frequency_values)
    return _as_law(Law.RANK_FREQUENCY, line, -line.slope, series)


def fit_meaning_distribution(series: LawSeries) -> PowerLawFit:
    """gamma = -slope of log senses against log rank"""
    line = fit_log_arrays(series.rank_values, series.sense_values)
    return _as_law(Law.MEANING_DISTRIBUTION, line, -line.slope, series)


def fit_meaning_frequency(series: LawSeries) -> PowerLawFit:
    """delta = +slope of log senses against log frequency"""
    line = fit_log_arrays(series.frequency_values, series.sense_values)
    return _as_law(Law.MEANING_FREQUENCY, line, line.slope, series)


def fit_law(law: Law, x: np.ndarray, y: np.ndarray, bin_size: Optional[int] = None, segment: Optional[str] = None) -> PowerLawFit:
    line = fit_log_arrays(x, y, segment)
    exponent = line.slope if Law(law) is Law.MEANING_FREQUENCY else -line.slope
    return PowerLawFit(Law(law), _clean_zero(exponent), line.intercept, line.r_squared, line.sse_log, line.n_points, bin_size)


def predicted_delta(alpha: float, gamma: float) -> float:
    """delta' = gamma / alpha"""
    if not math.isfinite(alpha) or alpha <= 0:
        raise FitDomainError(f"alpha must be positive, got {alpha}")
    return gamma / alpha


def round_significant(value: Optional[float], digits: int = REPORT_DIGITS) -> Optional[float]:
    if value is None:
        return None
    if value == 0 or not math.isfinite(value):
        return float(value)
    return float(f"{value:.{digits}g}")


def _as_law(law: Law, line: LineFit, exponent: float, series: LawSeries) -> PowerLawFit:
    return PowerLawFit(
        law=law,
        exponent=_clean_zero(exponent),
        log_intercept=line.intercept,
        r_squared=line.r_squared,
        sse_log=line.sse_log,
        n_points=line.n_points,
        bin_size=getattr(series, "bin_size", None),
    )


def _clean_zero(value: float) -> float:
    # -0.0 from negating a flat slope
    return 0.0 if value == 0 else float(value)
