"""
Regimes
Breakpoint detection by exhaustive deviance scan and two-regime fits of the
three laws.

A split at index k puts the first k points (ascending x) in regime 1 and the
rest in regime 2; each side is fitted independently in log-log space and the
deviance is the sum of both residual sums of squares. The rank breakpoint i*
is carried over unchanged to the meaning distribution, and as the frequency
threshold f(i*) to the meaning-frequency law.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, NamedTuple, Optional, TextIO, Tuple, Union

import numpy as np

from zipflaws.binning import BinnedSeries
from zipflaws.errors import BreakpointRangeError, DegenerateFitError, FitDomainError, InsufficientDataError, ZipfLawsError
from zipflaws.lexicon import RankedLexicon
from zipflaws.powerlaw import Law, LawSeries, Points, PowerLawFit, line_fit, fit_law, predicted_delta

DEFAULT_MIN_SEGMENT = 3
# Deviances this close are treated as ties (earliest split wins).
TIE_RTOL = 1e-12
TIE_ATOL = 1e-12

CURVE_HEADER = ("split_index", "split_rank", "deviance")


class BreakpointStrategy(str, Enum):
    GLOBAL_MIN = "global_min"
    FIRST_LOCAL_MIN = "first_local_min"
    MANUAL = "manual"


class DevianceCandidate(NamedTuple):
    split_index: int
    split_rank: float
    deviance: float


@dataclass(frozen=True)
class DevianceCurve:
    candidates: Tuple[DevianceCandidate, ...]
    min_segment: int = DEFAULT_MIN_SEGMENT

    def __post_init__(self):
        candidates = tuple(DevianceCandidate(*c) for c in self.candidates)
        if not candidates:
            raise InsufficientDataError("deviance curve has no candidate splits")
        for left, right in zip(candidates, candidates[1:]):
            if right.split_index <= left.split_index:
                raise ZipfLawsError("deviance candidates must be ordered by split index")
        if any(not c.deviance >= 0 for c in candidates):
            raise ZipfLawsError("deviance must be non-negative")
        object.__setattr__(self, "candidates", candidates)

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def deviances(self) -> np.ndarray:
        return np.array([c.deviance for c in self.candidates], dtype=float)

    @property
    def split_ranks(self) -> np.ndarray:
        return np.array([c.split_rank for c in self.candidates], dtype=float)

    def global_minimum(self) -> DevianceCandidate:
        """Smallest deviance; earliest split among ties"""
        deviances = self.deviances
        ties = np.isclose(deviances, deviances.min(), rtol=TIE_RTOL, atol=TIE_ATOL)
        return self.candidates[int(np.argmax(ties))]

    def candidate(self, split_index: int) -> DevianceCandidate:
        for c in self.candidates:
            if c.split_index == split_index:
                return c
        first, last = self.candidates[0].split_index, self.candidates[-1].split_index
        raise BreakpointRangeError(f"split index {split_index} is outside the admissible range {first}..{last}")


@dataclass(frozen=True)
class Breakpoint:
    split_index: int
    i_star: float
    f_of_i_star: float
    provenance: BreakpointStrategy
    deviance: Optional[float] = None

    def __post_init__(self):
        if not self.f_of_i_star > 0:
            raise ZipfLawsError("frequency at the breakpoint must be positive")


@dataclass(frozen=True)
class TwoRegimeFit:
    """fit1 is the low-rank / high-frequency regime, fit2 the high-rank / low-frequency one"""

    law: Law
    fit1: PowerLawFit
    fit2: PowerLawFit
    breakpoint: Breakpoint
    total_deviance: float

    @property
    def exponents(self) -> Tuple[float, float]:
        return self.fit1.exponent, self.fit2.exponent

    @property
    def n_points(self) -> int:
        return self.fit1.n_points + self.fit2.n_points


def deviance_scan(points: Points, min_segment: int = DEFAULT_MIN_SEGMENT) -> DevianceCurve:
    """
    Fit both sides of every admissible split and record the summed
    log-space squared error.

    Points must be sorted by ascending x. Every split leaves at least
    min_segment points on each side.
    """
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise FitDomainError("points must be a sequence of (x, y) pairs")
    return scan_arrays(data[:, 0], data[:, 1], min_segment)


def scan_arrays(x: np.ndarray, y: np.ndarray, min_segment: int = DEFAULT_MIN_SEGMENT) -> DevianceCurve:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if min_segment < 2:
        raise InsufficientDataError(f"min_segment must be at least 2, got {min_segment}")
    n = len(x)
    if n < 2 * min_segment:
        raise InsufficientDataError(f"deviance scan needs at least {2 * min_segment} points for min_segment={min_segment}, got {n}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitDomainError("deviance scan needs strictly positive coordinates")
    if np.any(np.diff(x) < 0):
        raise ZipfLawsError("deviance scan needs points sorted by ascending x")

    log_x, log_y = np.log(x), np.log(y)
    candidates = []
    for k in range(min_segment, n - min_segment + 1):
        left = line_fit(log_x[:k], log_y[:k], "regime 1")
        right = line_fit(log_x[k:], log_y[k:], "regime 2")
        candidates.append(DevianceCandidate(k, float((x[k - 1] + x[k]) / 2.0), left.sse_log + right.sse_log))
    return DevianceCurve(tuple(candidates), min_segment)


def local_minima(curve: DevianceCurve) -> List[DevianceCandidate]:
    """
    Candidates lower than both neighbours, boundaries compared with their
    single neighbour. A flat run counts once, at its leftmost point.
    """
    deviances = curve.deviances
    minima = []
    start = 0
    n = len(deviances)
    while start < n:
        end = start
        while end + 1 < n and _tied(deviances[end + 1], deviances[start]):
            end += 1
        value = deviances[start]
        lower_than_left = start == 0 or _strictly_below(value, deviances[start - 1])
        lower_than_right = end == n - 1 or _strictly_below(value, deviances[end + 1])
        if lower_than_left and lower_than_right:
            minima.append(curve.candidates[start])
        start = end + 1
    return minima


def select_breakpoint(
    curve: DevianceCurve,
    series: LawSeries,
    strategy: Union[BreakpointStrategy, str] = BreakpointStrategy.FIRST_LOCAL_MIN,
    manual_index: Optional[int] = None,
) -> Breakpoint:
    """
    Pick a split from the curve and turn it into a breakpoint.

    i* is the midpoint of the two x values around the split; f(i*) comes
    from breakpoint_frequency on the same series. manual_index is a
    split_index (number of regime-1 points).
    """
    strategy = BreakpointStrategy(strategy)
    if strategy is BreakpointStrategy.GLOBAL_MIN:
        chosen = curve.global_minimum()
    elif strategy is BreakpointStrategy.FIRST_LOCAL_MIN:
        chosen = local_minima(curve)[0]
    else:
        if manual_index is None:
            raise BreakpointRangeError("manual breakpoint strategy needs a split index")
        chosen = curve.candidate(manual_index)
    return Breakpoint(
        split_index=chosen.split_index,
        i_star=chosen.split_rank,
        f_of_i_star=breakpoint_frequency(series, chosen.split_rank),
        provenance=strategy,
        deviance=chosen.deviance,
    )


def breakpoint_frequency(series: Union[BinnedSeries, RankedLexicon], i_star: float) -> float:
    """
    Frequency at a rank breakpoint.

    Raw rank i owns the interval [i - 0.5, i + 0.5), so a half-integer
    breakpoint maps to the following rank. For binned input the value is
    the mean raw frequency of the bin that owns that rank.
    """
    if isinstance(series, BinnedSeries):
        first, last, size = 1, series.n_binned, series.bin_size
    else:
        first, last, size = 1, len(series.frequency_values), 1
    if not math.isfinite(i_star) or not (first - 0.5 <= i_star < last + 0.5):
        raise BreakpointRangeError(f"breakpoint {i_star} lies outside the rank range {first}..{last}")
    owning_rank = int(math.floor(i_star + 0.5))
    index = (owning_rank - 1) // size
    return float(series.frequency_values[index])


def two_regime_fit_rank_frequency(series: LawSeries, bp: Breakpoint) -> TwoRegimeFit:
    """alpha1 / alpha2 split at i*: regime 1 holds ranks <= i*"""
    regime1 = series.rank_values <= bp.i_star
    return _two_regime(Law.RANK_FREQUENCY, series.rank_values, series.frequency_values, regime1, bp, series)


def two_regime_fit_meaning_distribution(series: LawSeries, bp: Breakpoint) -> TwoRegimeFit:
    """gamma1 / gamma2 split at the same i*"""
    regime1 = series.rank_values <= bp.i_star
    return _two_regime(Law.MEANING_DISTRIBUTION, series.rank_values, series.sense_values, regime1, bp, series)


def two_regime_fit_meaning_frequency(series: LawSeries, bp: Breakpoint) -> TwoRegimeFit:
    """delta1 / delta2 split at f(i*): regime 1 holds frequencies >= f(i*)"""
    regime1 = series.frequency_values >= bp.f_of_i_star
    return _two_regime(Law.MEANING_FREQUENCY, series.frequency_values, series.sense_values, regime1, bp, series)


def predicted_deltas(alpha1: float, alpha2: float, gamma1: float, gamma2: float) -> Tuple[float, float]:
    """(gamma1 / alpha1, gamma2 / alpha2)"""
    return predicted_delta(alpha1, gamma1), predicted_delta(alpha2, gamma2)


def write_deviance_curve(curve: DevianceCurve, stream: TextIO) -> None:
    stream.write("\t".join(CURVE_HEADER) + "\n")
    for c in curve.candidates:
        stream.write(f"{c.split_index}\t{c.split_rank!r}\t{c.deviance!r}\n")


def read_deviance_curve(stream: Iterable[str], min_segment: int = DEFAULT_MIN_SEGMENT) -> DevianceCurve:
    lines = [line.rstrip("\r\n") for line in stream if line.strip()]
    if not lines or tuple(lines[0].split("\t")) != CURVE_HEADER:
        raise ZipfLawsError(f"deviance file must start with the header {' '.join(CURVE_HEADER)}")
    candidates = []
    for line_number, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        try:
            candidates.append(DevianceCandidate(int(fields[0]), float(fields[1]), float(fields[2])))
        except (ValueError, IndexError):
            raise ZipfLawsError(f"deviance file line {line_number} is malformed") from None
    return DevianceCurve(tuple(candidates), min_segment)


def _two_regime(
    law: Law,
    x: np.ndarray,
    y: np.ndarray,
    regime1: np.ndarray,
    bp: Breakpoint,
    series: LawSeries,
) -> TwoRegimeFit:
    bin_size = getattr(series, "bin_size", None)
    fits = []
    for name, mask in (("regime 1", regime1), ("regime 2", ~regime1)):
        if np.count_nonzero(mask) < 2:
            raise DegenerateFitError(f"{law.value} needs at least 2 points on each side of the breakpoint, got {np.count_nonzero(mask)}", name)
        fits.append(fit_law(law, x[mask], y[mask], bin_size, segment=name))
    fit1, fit2 = fits
    return TwoRegimeFit(law, fit1, fit2, bp, fit1.sse_log + fit2.sse_log)


def _tied(a: float, b: float) -> bool:
    return bool(np.isclose(a, b, rtol=TIE_RTOL, atol=TIE_ATOL))


def _strictly_below(value: float, neighbour: float) -> bool:
    return value < neighbour and not _tied(value, neighbour)
