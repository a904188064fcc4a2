"""
One Regime Analyzer

Specialized Task: Fits the three Zipfian laws with a single power law each and
checks the exponent relation delta = gamma / alpha.

For one series (raw lexicon or one bin size):
- alpha from the rank-frequency law
- gamma from the law of meaning distribution
- delta from the meaning-frequency law
- delta' predicted from alpha and gamma, reported next to delta
"""

from typing import Any, Dict, Optional

from utils.analysis_logger import AnalysisLogger
from zipflaws.powerlaw import (
    LawSeries,
    fit_meaning_distribution,
    fit_meaning_frequency,
    fit_rank_frequency,
    predicted_delta,
    round_significant,
)


class OneRegimeAnalyzer:
    """
    Analysis stage: single power law per law

    Reported exponents are rounded to the report precision first; delta' is
    derived from those rounded values so the report is self-consistent.
    """

    def __init__(self, delta_tolerance: float = 0.02, echo: bool = False):
        self.name = "One Regime Analyzer"
        self.description = "Fits alpha, gamma and delta and compares delta with gamma/alpha"
        self.delta_tolerance = delta_tolerance
        self.echo = echo

    def analyze(self, series: LawSeries, label: str) -> Dict[str, Any]:
        logger = AnalysisLogger(self.name, echo=self.echo)
        logger.set_status("running")
        n_points = len(series.rank_values)

        try:
            logger.update_progress(0.1, f"Fitting rank-frequency law on {label} ({n_points} points)")
            alpha = fit_rank_frequency(series)
            logger.update_progress(0.4, f"Fitting law of meaning distribution on {label}")
            gamma = fit_meaning_distribution(series)
            logger.update_progress(0.7, f"Fitting meaning-frequency law on {label}")
            delta = fit_meaning_frequency(series)
        except ValueError as e:
            logger.log(self.name, "error", f"Fit failed on {label}: {e}")
            logger.set_status("failed")
            raise

        alpha_report, gamma_report, delta_report = alpha.to_report(), gamma.to_report(), delta.to_report()
        delta_prime = self._predicted(alpha_report["exponent"], gamma_report["exponent"], label, logger)
        delta_abs_diff = None
        if delta_prime is not None:
            delta_abs_diff = round_significant(abs(delta_report["exponent"] - delta_prime))
            logger.reasoning(self.name, f"delta={delta_report['exponent']} vs delta'={delta_prime} on {label}")
            if delta_abs_diff > self.delta_tolerance:
                logger.add_finding({
                    "series": label,
                    "severity": "medium",
                    "type": "exponent_relation",
                    "description": f"{label}: fitted delta {delta_report['exponent']} differs from gamma/alpha {delta_prime} by {delta_abs_diff}",
                })

        logger.set_metric("n_points", n_points)
        logger.set_metric("alpha", alpha_report["exponent"])
        logger.set_metric("gamma", gamma_report["exponent"])
        logger.set_metric("delta", delta_report["exponent"])
        logger.update_progress(1.0, f"One-regime fits complete for {label}")
        logger.set_status("completed")

        result = logger.to_dict(include_logs=self.echo)
        result["report"] = {
            "series": label,
            "bin_size": series.bin_size,
            "n_points": n_points,
            "alpha": alpha_report,
            "gamma": gamma_report,
            "delta": delta_report,
            "delta_prime": delta_prime,
            "delta_abs_diff": delta_abs_diff,
        }
        result["fits"] = {"alpha": alpha, "gamma": gamma, "delta": delta}
        return result

    def _predicted(self, alpha: float, gamma: float, label: str, logger: AnalysisLogger) -> Optional[float]:
        if alpha <= 0:
            logger.add_finding({
                "series": label,
                "severity": "high",
                "type": "non_decaying_frequency",
                "description": f"{label}: alpha={alpha} is not positive, delta' is undefined",
            })
            return None
        # exact quotient of the reported, already rounded exponents
        return predicted_delta(alpha, gamma)
