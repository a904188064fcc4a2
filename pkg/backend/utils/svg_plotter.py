"""
SVG Plotter
Log-log figures of the three laws and of the deviance curve, rendered with
matplotlib's SVG backend.

Fit lines are drawn from the reported (rounded) fit values, so figures made
by `analyze` and by `plot` from the saved files are identical. Output is
deterministic: fixed hash salt, no date metadata, text kept as text.

Element ids used in the SVG:
    points                 the scatter of (binned) points
    fit                    one-regime fit line
    fit-regime-1/2         two-regime fit lines
    breakpoint             dashed marker at i* (or f(i*))
    deviance               the deviance curve
    local-minimum-<k>      other local minima of the deviance curve
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from zipflaws.errors import PlotInputError
from zipflaws.powerlaw import Law, LawSeries
from zipflaws.regimes import DevianceCurve

SVG_RC = {
    "svg.hashsalt": "zipflaws",
    "svg.fonttype": "none",
}
FIGURE_SIZE = (5.0, 4.0)

AXIS_LABELS = {
    Law.RANK_FREQUENCY: ("rank i", "frequency f"),
    Law.MEANING_DISTRIBUTION: ("rank i", "senses μ"),
    Law.MEANING_FREQUENCY: ("frequency f", "senses μ"),
}
REPORT_KEYS = {
    Law.RANK_FREQUENCY: "alpha",
    Law.MEANING_DISTRIBUTION: "gamma",
    Law.MEANING_FREQUENCY: "delta",
}


def law_points(series: LawSeries, law: Law) -> Tuple[np.ndarray, np.ndarray]:
    if law is Law.RANK_FREQUENCY:
        return series.rank_values, series.frequency_values
    if law is Law.MEANING_DISTRIBUTION:
        return series.rank_values, series.sense_values
    return series.frequency_values, series.sense_values


def fitted_values(fit_report: Dict[str, Any], x: np.ndarray) -> np.ndarray:
    """Evaluate a reported power-law fit at x (natural-log intercept)"""
    law = Law(fit_report["law"])
    slope = fit_report["exponent"] if law is Law.MEANING_FREQUENCY else -fit_report["exponent"]
    return np.exp(fit_report["intercept"]) * np.asarray(x, dtype=float) ** slope


def one_regime_figure(series: LawSeries, law: Law, fit_report: Dict[str, Any], title: str) -> Figure:
    x, y = law_points(series, law)
    _check_length(x, fit_report["n_points"], title)
    fig, ax = _log_axes(law, title)
    ax.scatter(x, y, s=10, color="black", gid="points")
    span = _span(x)
    ax.plot(span, fitted_values(fit_report, span), color="red", linewidth=1.2, gid="fit",
            label=f"{REPORT_KEYS[law]} = {fit_report['exponent']:.3f}")
    ax.legend(loc="best")
    return fig


def two_regime_figure(
    series: LawSeries,
    law: Law,
    regime1: Dict[str, Any],
    regime2: Dict[str, Any],
    marker: float,
    title: str,
) -> Figure:
    """
    Regime 1 is a prefix of the series in rank order for all three laws:
    low ranks, and equivalently the highest frequencies.
    """
    x, y = law_points(series, law)
    n1 = regime1["n_points"]
    _check_length(x, n1 + regime2["n_points"], title)
    fig, ax = _log_axes(law, title)
    ax.scatter(x, y, s=10, color="black", gid="points")
    symbol = REPORT_KEYS[law]
    for index, (fit_report, segment, color) in enumerate(
        ((regime1, x[:n1], "red"), (regime2, x[n1:], "green")), start=1
    ):
        span = _span(segment)
        ax.plot(span, fitted_values(fit_report, span), color=color, linewidth=1.2, gid=f"fit-regime-{index}",
                label=f"{symbol}{index} = {fit_report['exponent']:.3f}")
    ax.axvline(marker, color="blue", linestyle="--", linewidth=1.0, gid="breakpoint")
    ax.legend(loc="best")
    return fig


def deviance_figure(
    curve: DevianceCurve,
    chosen_rank: float,
    minima_ranks: Sequence[float],
    title: str,
) -> Figure:
    """Deviance against candidate rank; chosen breakpoint blue, other local minima gray"""
    fig = Figure(figsize=FIGURE_SIZE)
    ax = fig.add_subplot()
    ax.set_xscale("log")
    ax.set_xlabel("rank i")
    ax.set_ylabel("deviance")
    ax.set_title(title)
    ax.plot(curve.split_ranks, curve.deviances, color="black", linewidth=1.0, gid="deviance")
    ax.axvline(chosen_rank, color="blue", linestyle="--", linewidth=1.0, gid="breakpoint")
    others = [r for r in minima_ranks if not np.isclose(r, chosen_rank)]
    for k, rank in enumerate(others, start=1):
        ax.axvline(rank, color="gray", linestyle="--", linewidth=0.8, gid=f"local-minimum-{k}")
    return fig


def save_svg(fig: Figure, path: Path) -> Path:
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def render_figures(
    series: LawSeries,
    label: str,
    series_report: Dict[str, Any],
    curve: Optional[DevianceCurve],
    output_dir: Path,
) -> List[Path]:
    """
    Write every figure available for one series report entry. Returns the
    written paths in a fixed order.
    """
    output_dir = Path(output_dir)
    written: List[Path] = []
    one = series_report.get("one_regime")
    if one:
        for law in Law:
            fig = one_regime_figure(series, law, one[REPORT_KEYS[law]], f"{label}: {law.value.replace('_', ' ')}")
            written.append(save_svg(fig, output_dir / f"{label}_{law.value}.svg"))

    two = series_report.get("two_regime")
    if two:
        if curve is None:
            raise PlotInputError(f"{label}: two-regime figures need the deviance curve")
        bp = two["breakpoint"]
        for law in Law:
            key = REPORT_KEYS[law]
            marker = bp["f_of_i_star"] if law is Law.MEANING_FREQUENCY else bp["i_star"]
            fig = two_regime_figure(series, law, two[f"{key}1"], two[f"{key}2"], marker,
                                    f"{label}: {law.value.replace('_', ' ')}, two regimes")
            written.append(save_svg(fig, output_dir / f"{label}_{law.value}_two_regime.svg"))
        fig = deviance_figure(curve, bp["i_star"], bp["local_minima"], f"{label}: deviance")
        written.append(save_svg(fig, output_dir / f"{label}_deviance.svg"))
    return written


def _log_axes(law: Law, title: str):
    fig = Figure(figsize=FIGURE_SIZE)
    ax = fig.add_subplot()
    ax.set_xscale("log")
    ax.set_yscale("log")
    xlabel, ylabel = AXIS_LABELS[law]
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return fig, ax


def _span(x: np.ndarray) -> np.ndarray:
    return np.array([float(np.min(x)), float(np.max(x))])


def _check_length(x: np.ndarray, expected: int, title: str) -> None:
    if len(x) != expected:
        raise PlotInputError(f"{title}: series has {len(x)} points but the fit used {expected}")
