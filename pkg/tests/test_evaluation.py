import math

import numpy as np
import pytest

from uvfwalk.errors import InvalidArgument, NoPeak
from uvfwalk.evaluation import (DEFAULT_PROPORTIONS, ContourError, compare_methods,
                                cumulative_distribution, extract_baseline_landmarks,
                                quantile_report, residuals, rms_closest_point)
from uvfwalk.geometry import Polyline, resample_uniform
from uvfwalk.targets import gaussian_heatmap

# Published per-proportion RMS rows (pixels).
TABLE_PROPORTIONS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95)
TABLE_BASELINE = (0.52, 1.00, 1.41, 2.00, 3.40, 4.45)
TABLE_UVF = (0.38, 0.72, 1.15, 1.76, 3.10, 4.10)


def expand_row(row, n=20):
    """An n-sample list whose lower quantiles at the table proportions are ``row``."""
    ranks = [math.ceil(q * n - 1e-9) for q in TABLE_PROPORTIONS]
    out, prev = [], 0
    for r, v in zip(ranks, row):
        out += [v] * (r - prev)
        prev = r
    return out + [row[-1]] * (n - prev)


def dense_min_distance(poly, p, spacing=1e-3):
    a, b = poly.segments()
    best = math.inf
    for s, e in zip(a, b):
        n = max(2, int(math.ceil(math.dist(s, e) / spacing)) + 1)
        t = np.linspace(0, 1, n)[:, None]
        best = min(best, np.hypot(*(s + t * (e - s) - p).T).min())
    return best


class TestRMS:
    def test_identity(self):
        p = Polyline([[0, 0], [5, 3], [9, 9]])
        for d in ("gt_to_pred", "pred_to_gt", "symmetric"):
            assert rms_closest_point(p, p, d) == 0.0

    @pytest.mark.parametrize("direction", ["gt_to_pred", "pred_to_gt", "symmetric", "sym"])
    def test_uniform_offset(self, direction):
        gt = Polyline([[0, 0], [10, 0]])
        pred = Polyline([[0, 2.5], [10, 2.5]])
        assert rms_closest_point(pred, gt, direction) == pytest.approx(2.5)

    def test_directions_differ(self):
        gt = Polyline([[0, 0], [10, 0]])
        pred = Polyline([[0, 0], [10, 0], [10, 6]])
        assert rms_closest_point(pred, gt, "gt_to_pred") == 0.0
        assert rms_closest_point(pred, gt, "pred_to_gt") == pytest.approx(math.sqrt(36 / 3))
        assert rms_closest_point(pred, gt, "symmetric") == pytest.approx(math.sqrt(36 / 5))

    def test_dense_sampling_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            pred = Polyline(rng.uniform(0, 50, (int(rng.integers(2, 6)), 2)))
            gt = Polyline(rng.uniform(0, 50, (int(rng.integers(2, 8)), 2)))
            d = np.array([dense_min_distance(pred, p) for p in gt.vertices])
            expect = math.sqrt(np.mean(d ** 2))
            assert rms_closest_point(pred, gt) == pytest.approx(expect, abs=1e-3)

    def test_translation_invariance(self):
        rng = np.random.default_rng(13)
        pred = Polyline(rng.uniform(0, 50, (5, 2)))
        gt = Polyline(rng.uniform(0, 50, (7, 2)))
        base = rms_closest_point(pred, gt, "symmetric")
        moved = rms_closest_point(pred.translated(17, -4), gt.translated(17, -4), "symmetric")
        assert moved == pytest.approx(base, abs=1e-9)

    def test_denser_prediction_same_shape(self):
        # Resampling the prediction along its own path leaves gt_to_pred unchanged.
        pred = Polyline([[0, 0], [20, 0], [20, 20]])
        gt = Polyline([[3, 2], [18, 4], [21, 15]])
        dense = Polyline(np.vstack([resample_uniform(Polyline(pred.vertices[:2]), 9).vertices,
                                    resample_uniform(Polyline(pred.vertices[1:]), 9).vertices[1:]]))
        assert rms_closest_point(dense, gt) == pytest.approx(rms_closest_point(pred, gt), abs=1e-9)

    def test_residual_count(self):
        pred = Polyline([[0, 0], [1, 0]])
        gt = Polyline([[0, 1], [1, 1], [2, 1]])
        assert len(residuals(pred, gt, "symmetric")) == 5

    def test_unknown_direction(self):
        p = Polyline([[0, 0], [1, 0]])
        with pytest.raises(InvalidArgument):
            rms_closest_point(p, p, "both")


class TestQuantileReport:
    def test_order_statistic(self):
        errs = [ContourError(float(v)) for v in range(1, 11)]
        assert quantile_report(errs, [0.5]).errors == (5.0,)

    def test_exact_ranks(self):
        errs = list(range(10, 0, -1))
        rep = quantile_report(errs, [0.1, 0.3, 0.35, 0.9, 1.0])
        assert rep.errors == (1.0, 3.0, 4.0, 9.0, 10.0)

    def test_single(self):
        assert set(quantile_report([2.5]).errors) == {2.5}

    def test_default_proportions(self):
        rep = quantile_report(range(1, 101))
        assert rep.proportions == TABLE_PROPORTIONS == DEFAULT_PROPORTIONS
        assert rep.errors == (10.0, 30.0, 50.0, 70.0, 90.0, 95.0)

    def test_monotone(self):
        rng = np.random.default_rng(14)
        rep = quantile_report(rng.exponential(size=37), np.linspace(0.01, 1, 50))
        assert list(rep.errors) == sorted(rep.errors)

    def test_errors(self):
        with pytest.raises(InvalidArgument):
            quantile_report([])
        with pytest.raises(InvalidArgument):
            quantile_report([1.0], [0.0])
        with pytest.raises(InvalidArgument):
            quantile_report([1.0], [0.5, 0.3])
        with pytest.raises(InvalidArgument):
            ContourError(-1.0)
        with pytest.raises(InvalidArgument):
            ContourError(float("nan"))

    def test_scaled(self):
        rep = quantile_report([1.0, 2.0]).scaled(0.5)
        assert rep.errors[-1] == 1.0

    def test_cumulative_distribution(self):
        e, f = cumulative_distribution([3.0, 1.0, 2.0, 2.0])
        assert list(e) == [1.0, 2.0, 2.0, 3.0]
        assert list(f) == [0.25, 0.5, 0.75, 1.0]


class TestCompareMethods:
    def test_identity(self):
        errs = [0.3, 1.2, 0.7]
        assert compare_methods(errs, errs).differences == (0.0,) * 6

    def test_table_rows_direct(self):
        cmp = compare_methods(TABLE_BASELINE, TABLE_UVF, TABLE_PROPORTIONS)
        assert cmp.differences[0] == pytest.approx(0.14, abs=1e-9)
        assert cmp.differences[-1] == pytest.approx(0.35, abs=1e-9)

    def test_table_rows_expanded(self):
        cmp = compare_methods(expand_row(TABLE_BASELINE), expand_row(TABLE_UVF), TABLE_PROPORTIONS)
        assert cmp.a.errors == TABLE_BASELINE
        assert cmp.b.errors == TABLE_UVF
        np.testing.assert_allclose(cmp.differences, [0.14, 0.28, 0.26, 0.24, 0.30, 0.35], atol=1e-9)
        assert min(cmp.differences) == pytest.approx(0.14)
        assert max(cmp.differences) == pytest.approx(0.35)

    def test_random_matches_independent_reports(self):
        rng = np.random.default_rng(15)
        a, b = rng.gamma(2, size=40), rng.gamma(2, size=55)
        cmp = compare_methods(a, b)
        for q, d in zip(DEFAULT_PROPORTIONS, cmp.differences):
            qa = np.sort(a)[math.ceil(q * 40 - 1e-9) - 1]
            qb = np.sort(b)[math.ceil(q * 55 - 1e-9) - 1]
            assert d == qa - qb


class TestBaselineLandmarks:
    def test_recovers_centers(self):
        centers = np.c_[np.linspace(20, 200, 21), np.full(21, 100.0)]
        hms = [gaussian_heatmap(c, 5.0, 224, 224) for c in centers]
        poly = extract_baseline_landmarks(hms)
        assert len(poly) == 21
        assert np.max(np.hypot(*(poly.vertices - centers).T)) < 0.05

    def test_duplicate_peaks_merge_then_fail(self):
        hms = [gaussian_heatmap((30, 30), 4, 64, 64)] * 2
        with pytest.raises(InvalidArgument):
            extract_baseline_landmarks(hms)

    def test_duplicates_merged(self):
        a = gaussian_heatmap((10, 10), 3, 40, 40)
        b = gaussian_heatmap((30, 20), 3, 40, 40)
        assert len(extract_baseline_landmarks([a, a, b, b, a])) == 3

    def test_order_preserved(self):
        centers = [(50, 10), (10, 40), (30, 5), (5, 5)]
        poly = extract_baseline_landmarks([gaussian_heatmap(c, 3, 64, 64) for c in centers])
        np.testing.assert_allclose(poly.vertices, centers, atol=1e-3)

    def test_constant_heatmap_ordinal(self):
        hms = [gaussian_heatmap((10, 10), 3, 40, 40), np.zeros((40, 40)),
               gaussian_heatmap((30, 30), 3, 40, 40)]
        with pytest.raises(NoPeak) as info:
            extract_baseline_landmarks(hms)
        assert info.value.ordinal == 1

    def test_shape_mismatch(self):
        with pytest.raises(InvalidArgument):
            extract_baseline_landmarks([np.eye(4), np.eye(5)])
