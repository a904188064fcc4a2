"""
Report Bundle Generator
Collects the per-series analyzer results of one run into a single report
(report.json) and renders the human summary table (summary.txt).

Reports hold no timestamps or absolute paths, so identical inputs and
settings give byte-identical files.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from zipflaws.lexicon import DataSummary

ONE_REGIME_COLUMNS = ("bin_size", "alpha", "gamma", "delta", "delta'")
TWO_REGIME_COLUMNS = (
    "bin_size", "alpha1", "alpha2", "gamma1", "gamma2",
    "delta1", "delta1'", "delta2", "delta2'", "i*", "f(i*)",
)
COLUMN_WIDTH = 12


class ReportBundleGenerator:
    """Builds the run report from analyzer outputs"""

    def generate_bundle(
        self,
        run_name: str,
        inputs: Dict[str, Optional[str]],
        data_summary: DataSummary,
        settings: Dict[str, Any],
        series_results: List[Dict[str, Any]],
        extra_findings: Optional[List[Dict[str, Any]]] = None,
    ) -> Dict[str, Any]:
        """
        series_results holds one entry per analysed series, in config order:
        {"label", "bin_size", "n_points", "dropped", "one_regime", "two_regime"}
        where the regime entries are analyzer result dicts or None.
        """
        all_findings = list(extra_findings or [])
        series_reports = []
        for entry in series_results:
            one = entry.get("one_regime")
            two = entry.get("two_regime")
            for result in (one, two):
                if result:
                    all_findings.extend(result.get("findings", []))
            series_reports.append({
                "label": entry["label"],
                "bin_size": entry["bin_size"],
                "n_points": entry["n_points"],
                "dropped": entry.get("dropped", 0),
                "one_regime": one["report"] if one else None,
                "two_regime": two["report"] if two else None,
            })

        return {
            "run": run_name,
            "inputs": {key: Path(value).name if value else None for key, value in inputs.items()},
            "data_summary": data_summary.to_dict(),
            "settings": settings,
            "series": series_reports,
            "findings": all_findings,
            "summary": self._generate_concise_summary(all_findings, len(series_reports)),
        }

    def _generate_concise_summary(self, findings: List[Dict[str, Any]], series_count: int) -> str:
        if not findings:
            return f"Analysed {series_count} series. No findings."
        high = sum(1 for f in findings if f.get("severity") == "high")
        medium = sum(1 for f in findings if f.get("severity") == "medium")
        low = sum(1 for f in findings if f.get("severity") == "low")
        return f"Analysed {series_count} series. {len(findings)} findings: {high} high, {medium} medium, {low} low."


def write_report(bundle: Dict[str, Any], stream: TextIO) -> None:
    json.dump(bundle, stream, indent=2, ensure_ascii=False, allow_nan=False)
    stream.write("\n")


def read_report(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def summary_table(bundle: Dict[str, Any]) -> str:
    """Fixed-width text tables, 3 decimals, one row per series"""
    one_rows, two_rows = [], []
    for entry in bundle["series"]:
        size = _bin_size_cell(entry["bin_size"])
        one = entry.get("one_regime")
        if one:
            one_rows.append([
                size,
                _cell(one["alpha"]["exponent"]),
                _cell(one["gamma"]["exponent"]),
                _cell(one["delta"]["exponent"]),
                _cell(one["delta_prime"]),
            ])
        two = entry.get("two_regime")
        if two:
            bp = two["breakpoint"]
            two_rows.append([
                size,
                _cell(two["alpha1"]["exponent"]), _cell(two["alpha2"]["exponent"]),
                _cell(two["gamma1"]["exponent"]), _cell(two["gamma2"]["exponent"]),
                _cell(two["delta1"]["exponent"]), _cell(two["delta1_prime"]),
                _cell(two["delta2"]["exponent"]), _cell(two["delta2_prime"]),
                _cell(bp["i_star"]), _cell(bp["f_of_i_star"]),
            ])

    blocks = []
    if one_rows:
        blocks.append(_table("One regime analysis", ONE_REGIME_COLUMNS, one_rows))
    if two_rows:
        blocks.append(_table("Two regime analysis", TWO_REGIME_COLUMNS, two_rows))
    return "\n".join(blocks)


def _table(title: str, columns, rows: List[List[str]]) -> str:
    lines = [title, "".join(c.rjust(COLUMN_WIDTH) for c in columns)]
    lines.extend("".join(cell.rjust(COLUMN_WIDTH) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _bin_size_cell(bin_size: Optional[int]) -> str:
    return "-" if bin_size is None else str(bin_size)


def _cell(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3f}"
