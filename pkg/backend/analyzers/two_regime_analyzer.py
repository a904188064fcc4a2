"""
Two Regime Analyzer

Specialized Task: Finds the rank breakpoint i* of the rank-frequency law by an
exhaustive deviance scan, then fits every law on both sides of it.

- The scan fits both sides of each admissible split in log-log space
- Local minima of the deviance curve are kept; the configured strategy picks one
- i* is reused for the meaning distribution and transferred to the
  meaning-frequency law as the frequency threshold f(i*)
- delta1' = gamma1/alpha1 and delta2' = gamma2/alpha2 are reported next to
  the fitted delta1 and delta2

A global minimum deep in the tail usually comes from the long run of hapax
legomena; when it disagrees with the first local minimum a finding is raised.
"""

from typing import Any, Dict, Optional, Tuple

from utils.analysis_logger import AnalysisLogger
from zipflaws.powerlaw import LawSeries, predicted_delta, round_significant
from zipflaws.regimes import (
    DEFAULT_MIN_SEGMENT,
    BreakpointStrategy,
    TwoRegimeFit,
    local_minima,
    scan_arrays,
    select_breakpoint,
    two_regime_fit_meaning_distribution,
    two_regime_fit_meaning_frequency,
    two_regime_fit_rank_frequency,
)


class TwoRegimeAnalyzer:
    """
    Analysis stage: breakpoint detection and two-regime fits

    Works on whatever series it is given; binned series are the usual input.
    """

    def __init__(
        self,
        strategy: BreakpointStrategy = BreakpointStrategy.FIRST_LOCAL_MIN,
        min_segment: int = DEFAULT_MIN_SEGMENT,
        manual_split: Optional[int] = None,
        delta_tolerance: float = 0.02,
        echo: bool = False,
    ):
        self.name = "Two Regime Analyzer"
        self.description = "Scans rank breakpoints by deviance and fits both regimes of every law"
        self.strategy = BreakpointStrategy(strategy)
        self.min_segment = min_segment
        self.manual_split = manual_split
        self.delta_tolerance = delta_tolerance
        self.echo = echo

    def analyze(self, series: LawSeries, label: str) -> Dict[str, Any]:
        logger = AnalysisLogger(self.name, echo=self.echo)
        logger.set_status("running")

        try:
            logger.update_progress(0.1, f"Scanning breakpoints on {label} (min_segment={self.min_segment})")
            curve = scan_arrays(series.rank_values, series.frequency_values, self.min_segment)
            minima = local_minima(curve)
            logger.log(self.name, "info", f"Deviance curve has {len(curve)} candidates and {len(minima)} local minima",
                       data={"local_minima": [m.split_rank for m in minima]})

            logger.update_progress(0.4, f"Selecting breakpoint with strategy {self.strategy.value}")
            breakpoint = select_breakpoint(curve, series, self.strategy, self.manual_split)
            logger.reasoning(self.name, f"{label}: i*={breakpoint.i_star}, f(i*)={breakpoint.f_of_i_star} "
                                        f"(split {breakpoint.split_index}, {self.strategy.value})")
            self._check_global_minimum(curve, breakpoint, label, logger)

            logger.update_progress(0.6, f"Fitting both regimes of the three laws on {label}")
            rank_frequency = two_regime_fit_rank_frequency(series, breakpoint)
            meaning_distribution = two_regime_fit_meaning_distribution(series, breakpoint)
            meaning_frequency = two_regime_fit_meaning_frequency(series, breakpoint)
        except ValueError as e:
            logger.log(self.name, "error", f"Two-regime analysis failed on {label}: {e}")
            logger.set_status("failed")
            raise

        alpha = self._reports(rank_frequency)
        gamma = self._reports(meaning_distribution)
        delta = self._reports(meaning_frequency)
        delta1_prime = self._predicted(alpha[0]["exponent"], gamma[0]["exponent"], label, "regime 1", logger)
        delta2_prime = self._predicted(alpha[1]["exponent"], gamma[1]["exponent"], label, "regime 2", logger)
        delta1_diff = self._compare(delta[0]["exponent"], delta1_prime, label, "regime 1", logger)
        delta2_diff = self._compare(delta[1]["exponent"], delta2_prime, label, "regime 2", logger)

        logger.set_metric("i_star", breakpoint.i_star)
        logger.set_metric("f_of_i_star", breakpoint.f_of_i_star)
        logger.set_metric("local_minima", len(minima))
        logger.update_progress(1.0, f"Two-regime fits complete for {label}")
        logger.set_status("completed")

        result = logger.to_dict(include_logs=self.echo)
        result["report"] = {
            "series": label,
            "bin_size": series.bin_size,
            "n_points": len(series.rank_values),
            "breakpoint": {
                "split_index": breakpoint.split_index,
                "i_star": round_significant(breakpoint.i_star),
                "f_of_i_star": round_significant(breakpoint.f_of_i_star),
                "provenance": breakpoint.provenance.value,
                "deviance": round_significant(breakpoint.deviance),
                "local_minima": [round_significant(m.split_rank) for m in minima],
            },
            "alpha1": alpha[0], "alpha2": alpha[1],
            "gamma1": gamma[0], "gamma2": gamma[1],
            "delta1": delta[0], "delta2": delta[1],
            "delta1_prime": delta1_prime,
            "delta2_prime": delta2_prime,
            "delta1_abs_diff": delta1_diff,
            "delta2_abs_diff": delta2_diff,
            "total_deviance": {
                "rank_frequency": round_significant(rank_frequency.total_deviance),
                "meaning_distribution": round_significant(meaning_distribution.total_deviance),
                "meaning_frequency": round_significant(meaning_frequency.total_deviance),
            },
        }
        result["curve"] = curve
        result["fits"] = {
            "rank_frequency": rank_frequency,
            "meaning_distribution": meaning_distribution,
            "meaning_frequency": meaning_frequency,
        }
        return result

    def _check_global_minimum(self, curve, breakpoint, label: str, logger: AnalysisLogger):
        global_min = curve.global_minimum()
        if global_min.split_index != breakpoint.split_index:
            logger.add_finding({
                "series": label,
                "severity": "low",
                "type": "competing_minimum",
                "description": f"{label}: global deviance minimum at rank {global_min.split_rank} differs from the chosen breakpoint {breakpoint.i_star}",
            })

    @staticmethod
    def _reports(fit: TwoRegimeFit) -> Tuple[Dict[str, Any], Dict[str, Any]]:
        return fit.fit1.to_report(), fit.fit2.to_report()

    def _predicted(self, alpha: float, gamma: float, label: str, regime: str, logger: AnalysisLogger) -> Optional[float]:
        if alpha <= 0:
            logger.add_finding({
                "series": label,
                "severity": "high",
                "type": "non_decaying_frequency",
                "description": f"{label} {regime}: alpha={alpha} is not positive, delta' is undefined",
            })
            return None
        # exact quotient of the reported, already rounded exponents
        return predicted_delta(alpha, gamma)

    def _compare(self, delta: float, delta_prime: Optional[float], label: str, regime: str, logger: AnalysisLogger) -> Optional[float]:
        if delta_prime is None:
            return None
        diff = round_significant(abs(delta - delta_prime))
        if diff > self.delta_tolerance:
            logger.add_finding({
                "series": label,
                "severity": "medium",
                "type": "exponent_relation",
                "description": f"{label} {regime}: fitted delta {delta} differs from gamma/alpha {delta_prime} by {diff}",
            })
        return diff
