"""
zipflaws - Zipf's meaning laws
Command line that orchestrates the analysis stages: ingest, intersect, rank,
bin, fit one and two regimes, then write reports, plot data and figures.

    python main.py bins 12
    python main.py analyze --config ../config/example.yaml
    python main.py plot zipflaws_output
    python main.py synth --spec ../tests/fixtures/synth_two_regime.conf --output-dir synth
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from analyzers.one_regime_analyzer import OneRegimeAnalyzer
from analyzers.two_regime_analyzer import TwoRegimeAnalyzer
from utils.config import AnalysisConfig, OutputFormat, load_analysis_config
from utils.report_bundle import ReportBundleGenerator, read_report, summary_table, write_report
from utils.svg_plotter import render_figures
from zipflaws.binning import BinnedSeries, RemainderPolicy, equal_size_bin, read_binned_series, valid_bin_sizes, write_binned_series
from zipflaws.errors import PlotInputError, ZipfLawsError
from zipflaws.lexicon import (
    RankedLexicon,
    intersect,
    lexicon_tables,
    load_frequency_table,
    load_meaning_table,
    load_token_stream,
    rank,
    summarize,
    write_frequency_table,
    write_meaning_table,
)
from zipflaws.regimes import BreakpointStrategy, read_deviance_curve, write_deviance_curve
from zipflaws.synth import format_synth_spec, generate, integerize, make_synth_spec, read_synth_values

bundle_generator = ReportBundleGenerator()

SYNTH_FIELDS = ("n", "alpha1", "alpha2", "i_star", "C", "gamma1", "gamma2", "D", "noise_sigma", "seed")


def progress(run_id: str, message: str, quiet: bool = False):
    if not quiet:
        print(f"[{run_id}] {message}", file=sys.stderr)


def series_label(bin_size: Optional[int]) -> str:
    return "raw" if bin_size is None else f"bin_{bin_size}"


def run_analysis(config: AnalysisConfig, quiet: bool = False, verbose: bool = False) -> Dict[str, Any]:
    """
    Run every requested stage and write the requested outputs.
    Series are analysed sequentially, raw first, then bin sizes in config order.
    verbose echoes analyzer logs to stderr and keeps them in logs.json,
    which carries timestamps and so stays out of the reproducible outputs.
    """
    run_id = config.run_name

    progress(run_id, "Reading corpus and dictionary...", quiet)
    if config.frequencies is not None:
        freq = load_frequency_table(config.frequencies, config.delimiter)
    else:
        freq = load_token_stream(config.tokens, config.token_filter, config.delimiter)
    meanings = load_meaning_table(config.meanings, config.delimiter)
    joined = intersect(freq, meanings)
    data_summary = summarize(freq, meanings, joined)
    lexicon = rank(joined)
    progress(run_id, f"Ranked {lexicon.n} lemmas ({joined.drops.corpus_only} corpus-only, "
                     f"{joined.drops.dictionary_only} dictionary-only dropped)", quiet)

    findings: List[Dict[str, Any]] = []
    series_list: List[Any] = []
    if config.analyse_raw:
        series_list.append(lexicon)
    for bin_size in dict.fromkeys(config.bin_sizes):
        binned = equal_size_bin(lexicon, bin_size, config.remainder_policy)
        if binned.dropped:
            findings.append({
                "series": series_label(bin_size),
                "severity": "low",
                "type": "dropped_tail",
                "description": f"bin size {bin_size}: {binned.dropped} lowest-frequency lemmas dropped to fill whole bins",
            })
        series_list.append(binned)

    one_regime_analyzer = OneRegimeAnalyzer(config.delta_tolerance, echo=verbose)
    two_regime_analyzer = TwoRegimeAnalyzer(
        config.strategy, config.min_segment, config.manual_split, config.delta_tolerance, echo=verbose,
    )

    series_results = []
    for series in series_list:
        label = series_label(series.bin_size)
        entry: Dict[str, Any] = {
            "label": label,
            "bin_size": series.bin_size,
            "n_points": len(series.rank_values),
            "dropped": getattr(series, "dropped", 0),
            "one_regime": None,
            "two_regime": None,
            "series": series,
        }
        if config.wants_one_regime:
            progress(run_id, f"Running {one_regime_analyzer.name} on {label}...", quiet)
            entry["one_regime"] = one_regime_analyzer.analyze(series, label)
        if config.wants_two_regimes:
            progress(run_id, f"Running {two_regime_analyzer.name} on {label}...", quiet)
            entry["two_regime"] = two_regime_analyzer.analyze(series, label)
        series_results.append(entry)

    bundle = bundle_generator.generate_bundle(
        run_name=run_id,
        inputs={
            "frequencies": str(config.frequencies) if config.frequencies else None,
            "tokens": str(config.tokens) if config.tokens else None,
            "meanings": str(config.meanings),
        },
        data_summary=data_summary,
        settings=_settings(config),
        series_results=series_results,
        extra_findings=findings,
    )

    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    if OutputFormat.REPORT in config.formats:
        with open(output_dir / "report.json", "w", encoding="utf-8", newline="\n") as f:
            write_report(bundle, f)
        with open(output_dir / "summary.txt", "w", encoding="utf-8", newline="\n") as f:
            f.write(summary_table(bundle))
    if OutputFormat.PLOT_DATA in config.formats:
        for entry in series_results:
            _write_plot_data(entry, output_dir)
    if OutputFormat.FIGURES in config.formats:
        for entry, series_report in zip(series_results, bundle["series"]):
            two = entry["two_regime"]
            render_figures(entry["series"], entry["label"], series_report, two["curve"] if two else None, output_dir)
    if verbose:
        with open(output_dir / "logs.json", "w", encoding="utf-8", newline="\n") as f:
            json.dump(_stage_logs(series_results), f, indent=2, ensure_ascii=False)
            f.write("\n")

    for finding in bundle["findings"]:
        progress(run_id, f"Finding ({finding['severity']}): {finding['description']}", quiet)
    progress(run_id, f"Analysis completed. {bundle['summary']}", quiet)
    return bundle


def run_plot(run_dir: Path, output_dir: Optional[Path] = None, quiet: bool = False) -> List[Path]:
    """Rebuild every figure of a finished run from its report and plot-data files"""
    run_dir = Path(run_dir)
    output_dir = Path(output_dir) if output_dir else run_dir
    report_path = run_dir / "report.json"
    if not report_path.is_file():
        raise PlotInputError(f"no report.json in {run_dir}; run analyze with the report format first")
    try:
        bundle = read_report(report_path)
    except json.JSONDecodeError as e:
        raise PlotInputError(f"{report_path}: not a valid report ({e.msg})") from None

    output_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for series_report in bundle.get("series", []):
        label = series_report["label"]
        progress(bundle.get("run", "plot"), f"Plotting {label}...", quiet)
        series = _read_series(run_dir / f"series_{label}.tsv")
        curve = None
        if series_report.get("two_regime"):
            curve_path = run_dir / f"deviance_{label}.tsv"
            if not curve_path.is_file():
                raise PlotInputError(f"missing plot data {curve_path}")
            with open(curve_path, "r", encoding="utf-8") as f:
                curve = read_deviance_curve(f)
        written.extend(render_figures(series, label, series_report, curve, output_dir))
    return written


def run_synth(values: Dict[str, Any], output_dir: Path, mode: str = "round", quiet: bool = False) -> Path:
    """Generate a lexicon and write it as frequency and meaning tables plus the spec used"""
    spec = make_synth_spec(values)
    run_id = "synth"
    progress(run_id, f"Generating {spec.n} lemmas (alpha1={spec.alpha1}, alpha2={spec.alpha2}, i*={spec.i_star})", quiet)
    result = integerize(generate(spec), mode)
    distortion = result.distortion
    progress(run_id, f"Integerized ({mode}): {distortion.changed} frequencies changed, "
                     f"max change {distortion.max_abs_change:.3g}", quiet)
    freq, meanings = lexicon_tables(result.lexicon)

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    with open(output_dir / "frequencies.tsv", "w", encoding="utf-8", newline="\n") as f:
        write_frequency_table(freq, f)
    with open(output_dir / "meanings.tsv", "w", encoding="utf-8", newline="\n") as f:
        write_meaning_table(meanings, f)
    with open(output_dir / "synth_spec.conf", "w", encoding="utf-8", newline="\n") as f:
        f.write(format_synth_spec(spec))
    return output_dir


def _settings(config: AnalysisConfig) -> Dict[str, Any]:
    return {
        "bin_sizes": list(dict.fromkeys(config.bin_sizes)),
        "include_raw": config.analyse_raw,
        "remainder_policy": config.remainder_policy.value,
        "regimes": config.regimes.value,
        "strategy": config.strategy.value,
        "manual_split": config.manual_split,
        "min_segment": config.min_segment,
        "excluded_tags": sorted(config.excluded_tags) if config.tokens else None,
        "delta_tolerance": config.delta_tolerance,
    }


def _stage_logs(series_results: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    stages = []
    for entry in series_results:
        for key in ("one_regime", "two_regime"):
            result = entry[key]
            if result:
                stages.append({
                    "series": entry["label"],
                    "stage": result["stage_name"],
                    "reasoning": result["reasoning"],
                    "logs": result.get("logs", []),
                })
    return stages


def _write_plot_data(entry: Dict[str, Any], output_dir: Path):
    series = entry["series"]
    if isinstance(series, RankedLexicon):
        # raw points are written as bins of one record
        series = equal_size_bin(series, 1)
    with open(output_dir / f"series_{entry['label']}.tsv", "w", encoding="utf-8", newline="\n") as f:
        write_binned_series(series, f)
    if entry["two_regime"]:
        with open(output_dir / f"deviance_{entry['label']}.tsv", "w", encoding="utf-8", newline="\n") as f:
            write_deviance_curve(entry["two_regime"]["curve"], f)


def _read_series(path: Path) -> BinnedSeries:
    if not path.is_file():
        raise PlotInputError(f"missing plot data {path}; run analyze with the plot-data format")
    with open(path, "r", encoding="utf-8") as f:
        return read_binned_series(f)


def cmd_bins(args) -> int:
    print(" ".join(str(d) for d in valid_bin_sizes(args.n)))
    return 0


def cmd_analyze(args) -> int:
    overrides = {
        "frequencies": args.frequencies,
        "tokens": args.tokens,
        "meanings": args.meanings,
        "excluded_tags": args.exclude_tags,
        "delimiter": args.delimiter,
        "bin_sizes": args.bin_sizes,
        "include_raw": args.include_raw,
        "remainder_policy": args.remainder_policy,
        "regimes": args.regimes,
        "strategy": args.strategy,
        "manual_split": args.manual_split,
        "min_segment": args.min_segment,
        "output_dir": args.output_dir,
        "formats": args.formats,
        "delta_tolerance": args.delta_tolerance,
        "run_name": args.run_name,
    }
    config = load_analysis_config(args.config, overrides)
    run_analysis(config, quiet=args.quiet, verbose=args.verbose)
    return 0


def cmd_plot(args) -> int:
    written = run_plot(args.run_dir, args.output_dir, quiet=args.quiet)
    progress("plot", f"Wrote {len(written)} figures", args.quiet)
    return 0


def cmd_synth(args) -> int:
    values: Dict[str, Any] = {}
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as f:
                values.update(read_synth_values(f))
        except OSError as e:
            raise ZipfLawsError(f"cannot read spec {args.spec}: {e.strerror}") from None
    for field in SYNTH_FIELDS:
        value = getattr(args, field)
        if value is not None:
            values[field] = value
    run_synth(values, args.output_dir, args.integerize, quiet=args.quiet)
    return 0


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress progress lines on stderr")

    parser = argparse.ArgumentParser(prog="zipflaws", description="Zipf's meaning laws: fits, breakpoints and exponent relations")
    sub = parser.add_subparsers(dest="command", required=True)

    bins = sub.add_parser("bins", parents=[common], help="list the bin sizes that divide n")
    bins.add_argument("n", type=positive_int)
    bins.set_defaults(handler=cmd_bins)

    analyze = sub.add_parser("analyze", parents=[common], help="fit the three laws in one and two regimes")
    analyze.add_argument("--config", type=Path, help="YAML configuration (see config/example.yaml)")
    source = analyze.add_mutually_exclusive_group()
    source.add_argument("--frequencies", type=Path, help="lemma/count table")
    source.add_argument("--tokens", type=Path, help="surface/lemma/tag token file")
    analyze.add_argument("--meanings", type=Path, help="lemma/senses table")
    analyze.add_argument("--exclude-tags", nargs="*", help="tag classes dropped from the token file")
    analyze.add_argument("--delimiter")
    analyze.add_argument("--bin-sizes", nargs="+", type=positive_int)
    analyze.add_argument("--no-raw", dest="include_raw", action="store_const", const=False,
                         help="analyse binned series only")
    analyze.add_argument("--remainder-policy", choices=[p.value for p in RemainderPolicy])
    analyze.add_argument("--regimes", choices=["one", "two", "both"])
    analyze.add_argument("--strategy", choices=[s.value for s in BreakpointStrategy])
    analyze.add_argument("--manual-split", type=positive_int, help="split index for the manual strategy")
    analyze.add_argument("--min-segment", type=positive_int)
    analyze.add_argument("--output-dir", type=Path)
    analyze.add_argument("--formats", nargs="+", choices=[f.value for f in OutputFormat])
    analyze.add_argument("--delta-tolerance", type=float)
    analyze.add_argument("--run-name")
    analyze.add_argument("--verbose", action="store_true", help="echo analyzer logs and write logs.json")
    analyze.set_defaults(handler=cmd_analyze)

    plot = sub.add_parser("plot", parents=[common], help="render SVG figures from a finished analysis")
    plot.add_argument("run_dir", type=Path, help="output directory of an analyze run")
    plot.add_argument("--output-dir", type=Path, help="where to write figures (default: run_dir)")
    plot.set_defaults(handler=cmd_plot)

    synth = sub.add_parser("synth", parents=[common], help="generate a synthetic lexicon with known exponents")
    synth.add_argument("--spec", type=Path, help="key=value spec file; flags override it")
    synth.add_argument("--n", type=int)
    synth.add_argument("--alpha1", type=float)
    synth.add_argument("--alpha2", type=float)
    synth.add_argument("--i-star", dest="i_star", type=int)
    synth.add_argument("--C", dest="C", type=float)
    synth.add_argument("--gamma1", type=float)
    synth.add_argument("--gamma2", type=float)
    synth.add_argument("--D", dest="D", type=float)
    synth.add_argument("--noise-sigma", type=float)
    synth.add_argument("--seed", type=int)
    synth.add_argument("--integerize", choices=["round", "floor"], default="round")
    synth.add_argument("--output-dir", type=Path, default=Path("synth_output"))
    synth.set_defaults(handler=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ZipfLawsError as e:
        print(f"error [{e.stage}]: {e.message}", file=sys.stderr)
    except OSError as e:
        print(f"error [{args.command}]: {e.filename}: {e.strerror}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
