"""
Tests for the deviance scan, breakpoint selection and two-regime fits
"""

import io

import numpy as np
import pytest

from zipflaws.binning import equal_size_bin
from zipflaws.errors import BreakpointRangeError, DegenerateFitError, FitDomainError, InsufficientDataError, ZipfLawsError
from zipflaws.powerlaw import fit_loglog
from zipflaws.regimes import (
    Breakpoint,
    BreakpointStrategy,
    DevianceCandidate,
    DevianceCurve,
    breakpoint_frequency,
    deviance_scan,
    local_minima,
    read_deviance_curve,
    scan_arrays,
    select_breakpoint,
    two_regime_fit_meaning_distribution,
    two_regime_fit_meaning_frequency,
    two_regime_fit_rank_frequency,
    write_deviance_curve,
)
from zipflaws.synth import SynthSpec, generate

from conftest import make_lexicon


def naive_sse(x, y):
    lx, ly = np.log(x), np.log(y)
    n = len(lx)
    mx, my = sum(lx) / n, sum(ly) / n
    slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)
    intercept = my - slope * mx
    return sum((b - intercept - slope * a) ** 2 for a, b in zip(lx, ly))


def naive_scan(x, y, min_segment):
    rows = []
    for k in range(min_segment, len(x) - min_segment + 1):
        rows.append((k, (x[k - 1] + x[k]) / 2.0, naive_sse(x[:k], y[:k]) + naive_sse(x[k:], y[k:])))
    return rows


def curve_of(deviances, min_segment=2):
    return DevianceCurve(tuple(
        DevianceCandidate(k, float(k) + 0.5, d) for k, d in enumerate(deviances, start=min_segment)
    ), min_segment)


def two_regime_lexicon(n=3082, i_star=300):
    # D keeps every sense count above the floor of one
    return generate(SynthSpec(n=n, alpha1=1.0, alpha2=2.0, i_star=i_star, C=1e6, gamma1=0.5, gamma2=1.0, D=1e6))


class TestDevianceScan:
    def test_matches_naive_double_loop(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(8, 201))
            x = np.sort(rng.uniform(1.0, 500.0, size=n))
            y = rng.uniform(0.5, 50.0, size=n)
            min_segment = int(rng.integers(2, 4))
            curve = scan_arrays(x, y, min_segment)
            expected = naive_scan(x, y, min_segment)
            assert len(curve) == len(expected)
            for candidate, (k, split_rank, deviance) in zip(curve.candidates, expected):
                assert candidate.split_index == k
                assert candidate.split_rank == pytest.approx(split_rank, abs=1e-10)
                assert candidate.deviance == pytest.approx(deviance, abs=1e-10)

    def test_split_never_worse_than_single_fit(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(6, 80))
            x = np.arange(1, n + 1, dtype=float)
            y = rng.uniform(1.0, 100.0, size=n)
            single = fit_loglog(np.column_stack([x, y])).sse_log
            curve = scan_arrays(x, y, 3)
            assert np.all(curve.deviances <= single + 1e-9)

    def test_candidate_range(self):
        x = np.arange(1, 11, dtype=float)
        curve = deviance_scan(np.column_stack([x, 100.0 / x]), min_segment=3)
        assert [c.split_index for c in curve.candidates] == [3, 4, 5, 6, 7]
        assert curve.candidates[0].split_rank == 3.5

    def test_too_few_points(self):
        x = np.arange(1, 6, dtype=float)
        with pytest.raises(InsufficientDataError) as excinfo:
            scan_arrays(x, 10.0 / x, 3)
        assert excinfo.value.stage == "regimes"

    def test_min_segment_below_two(self):
        x = np.arange(1, 11, dtype=float)
        with pytest.raises(InsufficientDataError):
            scan_arrays(x, x, 1)

    def test_unsorted_points_rejected(self):
        with pytest.raises(ZipfLawsError):
            scan_arrays(np.array([1.0, 3, 2, 4, 5, 6]), np.ones(6), 2)

    def test_non_positive_values_rejected(self):
        with pytest.raises(FitDomainError):
            scan_arrays(np.arange(1, 7, dtype=float), np.array([1.0, 1, 1, 0, 1, 1]), 2)


class TestBreakpointSelection:
    def test_exact_two_regime_minimum_next_to_joint(self):
        lex = two_regime_lexicon()
        curve = scan_arrays(lex.rank_values, lex.frequency_values, 3)
        best = curve.global_minimum()
        assert best.split_index in (299, 300)
        assert abs(best.split_rank - 300) <= 0.5

    def test_exact_two_regime_exponents(self):
        lex = two_regime_lexicon()
        curve = scan_arrays(lex.rank_values, lex.frequency_values, 3)
        bp = select_breakpoint(curve, lex, BreakpointStrategy.GLOBAL_MIN)
        rf = two_regime_fit_rank_frequency(lex, bp)
        md = two_regime_fit_meaning_distribution(lex, bp)
        mf = two_regime_fit_meaning_frequency(lex, bp)
        assert rf.exponents == pytest.approx((1.0, 2.0), abs=1e-9)
        assert md.exponents == pytest.approx((0.5, 1.0), abs=1e-9)
        assert mf.exponents == pytest.approx((0.5, 0.5), abs=1e-9)
        assert rf.n_points == lex.n

    def test_exact_two_regime_deviance_vanishes_only_at_joint(self):
        lex = two_regime_lexicon()
        curve = scan_arrays(lex.rank_values, lex.frequency_values, 3)
        for candidate in curve.candidates:
            if candidate.split_index in (299, 300):
                assert candidate.deviance == pytest.approx(0.0, abs=1e-12)
            else:
                assert candidate.deviance > 1e-9, candidate.split_index

    def test_binned_breakpoint_within_one_bin(self):
        lex = two_regime_lexicon()
        series = equal_size_bin(lex, 23)
        curve = scan_arrays(series.rank_values, series.frequency_values, 3)
        bp = select_breakpoint(curve, series, BreakpointStrategy.GLOBAL_MIN)
        # ranks 1..299 fill the first 13 bins, so the joint sits at split index 13;
        # mean binning may move the minimum by one bin
        assert abs(bp.split_index - 13) <= 1
        rf = two_regime_fit_rank_frequency(series, bp)
        assert rf.fit2.exponent == pytest.approx(2.0, abs=0.05)

    def test_first_local_minimum_differs_from_global(self):
        curve = curve_of([5.0, 2.0, 4.0, 3.0, 1.0, 6.0])
        assert [c.split_index for c in local_minima(curve)] == [3, 6]
        series = make_lexicon(list(range(20, 0, -1)))
        first = select_breakpoint(curve, series, BreakpointStrategy.FIRST_LOCAL_MIN)
        best = select_breakpoint(curve, series, BreakpointStrategy.GLOBAL_MIN)
        assert first.split_index == 3
        assert best.split_index == 6
        assert first.provenance is BreakpointStrategy.FIRST_LOCAL_MIN

    def test_global_minimum_tie_takes_earliest(self):
        curve = curve_of([3.0, 1.0, 2.0, 1.0, 4.0])
        assert curve.global_minimum().split_index == 3

    def test_plateau_counts_once_at_leftmost(self):
        curve = curve_of([3.0, 1.0, 1.0, 1.0, 2.0])
        assert [c.split_index for c in local_minima(curve)] == [3]

    def test_boundary_minima(self):
        curve = curve_of([1.0, 2.0, 3.0, 0.5])
        assert [c.split_index for c in local_minima(curve)] == [2, 5]

    def test_flat_curve_has_single_minimum(self):
        curve = curve_of([0.0, 0.0, 0.0])
        assert [c.split_index for c in local_minima(curve)] == [2]

    def test_manual_split(self):
        curve = curve_of([3.0, 1.0, 2.0])
        series = make_lexicon(list(range(10, 0, -1)))
        bp = select_breakpoint(curve, series, BreakpointStrategy.MANUAL, manual_index=4)
        assert bp.split_index == 4
        assert bp.i_star == 4.5
        with pytest.raises(BreakpointRangeError):
            select_breakpoint(curve, series, BreakpointStrategy.MANUAL, manual_index=9)
        with pytest.raises(BreakpointRangeError):
            select_breakpoint(curve, series, BreakpointStrategy.MANUAL)


class TestBreakpointFrequency:
    def test_half_integer_maps_to_following_rank(self):
        lex = make_lexicon([50, 40, 30, 20, 10, 5, 1])
        assert breakpoint_frequency(lex, 4.5) == 10.0
        assert breakpoint_frequency(lex, 4.0) == 20.0
        assert breakpoint_frequency(lex, 0.5) == 50.0

    def test_binned_value_is_owning_bin_mean(self):
        lex = make_lexicon([80, 60, 40, 20, 10, 6, 4, 2])
        series = equal_size_bin(lex, 2)
        # mean ranks 1.5, 3.5, 5.5, 7.5; split between the first two bins
        assert breakpoint_frequency(series, 2.5) == 30.0
        assert breakpoint_frequency(series, 2.0) == 70.0

    def test_out_of_range(self):
        lex = make_lexicon([3, 2, 1])
        with pytest.raises(BreakpointRangeError):
            breakpoint_frequency(lex, 3.5)
        with pytest.raises(BreakpointRangeError):
            breakpoint_frequency(lex, 0.2)


class TestTwoRegimeFits:
    def test_regime_needs_two_points(self):
        lex = make_lexicon([100, 50, 33, 25, 20, 17])
        bp = Breakpoint(split_index=1, i_star=1.5, f_of_i_star=50.0, provenance=BreakpointStrategy.MANUAL)
        with pytest.raises(DegenerateFitError, match="regime 1"):
            two_regime_fit_rank_frequency(lex, bp)

    def test_meaning_frequency_splits_on_frequency_threshold(self):
        lex = make_lexicon([100, 80, 60, 40, 30, 20, 10, 5], [9, 8, 7, 6, 4, 3, 2, 1])
        bp = Breakpoint(split_index=4, i_star=4.5, f_of_i_star=30.0, provenance=BreakpointStrategy.MANUAL)
        mf = two_regime_fit_meaning_frequency(lex, bp)
        rf = two_regime_fit_rank_frequency(lex, bp)
        assert (mf.fit1.n_points, mf.fit2.n_points) == (5, 3)
        assert (rf.fit1.n_points, rf.fit2.n_points) == (4, 4)

    def test_breakpoint_needs_positive_frequency(self):
        with pytest.raises(ZipfLawsError):
            Breakpoint(split_index=3, i_star=3.5, f_of_i_star=0.0, provenance=BreakpointStrategy.MANUAL)

    def test_noisy_two_regime_recovery(self):
        lex = generate(SynthSpec(n=3082, alpha1=1.0, alpha2=2.0, i_star=300, C=1e6,
                                 gamma1=0.5, gamma2=1.0, D=1e6, noise_sigma=0.05, seed=17))
        bp = Breakpoint(split_index=300, i_star=300.5, f_of_i_star=breakpoint_frequency(lex, 300.5),
                        provenance=BreakpointStrategy.MANUAL)
        rf = two_regime_fit_rank_frequency(lex, bp)
        md = two_regime_fit_meaning_distribution(lex, bp)
        assert rf.exponents == pytest.approx((1.0, 2.0), abs=0.05)
        assert md.exponents == pytest.approx((0.5, 1.0), abs=0.05)


class TestCurveFile:
    def test_written_curve_reads_back(self):
        x = np.arange(1, 13, dtype=float)
        curve = scan_arrays(x, 1000.0 / x ** 1.2, 3)
        out = io.StringIO()
        write_deviance_curve(curve, out)
        again = read_deviance_curve(io.StringIO(out.getvalue()), 3)
        assert again.candidates == curve.candidates

    def test_malformed_curve_file(self):
        with pytest.raises(ZipfLawsError):
            read_deviance_curve(io.StringIO("split_index\tsplit_rank\tdeviance\n3\tx\t1.0\n"))
