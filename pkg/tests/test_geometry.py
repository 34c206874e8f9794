import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uvfwalk.errors import InvalidArgument
from uvfwalk.geometry import (AffineMap2, Polyline, arc_position, nearest_point_on_polyline,
                              nearest_vertex, resample_uniform, square_resize_map)


def random_polyline(rng, n=None, closed=False):
    n = n or int(rng.integers(2, 12))
    return Polyline(rng.uniform(0, 100, (n, 2)), closed)


def dense_samples(poly, spacing=1e-3):
    a, b = poly.segments()
    out = []
    for p, q in zip(a, b):
        n = max(2, int(math.ceil(np.hypot(*(q - p)) / spacing)) + 1)
        t = np.linspace(0, 1, n)[:, None]
        out.append(p + t * (q - p))
    return np.vstack(out)


class TestPolyline:
    def test_rejects_repeated_vertex(self):
        with pytest.raises(InvalidArgument):
            Polyline([[0, 0], [0, 0], [1, 1]])

    def test_rejects_single_vertex(self):
        with pytest.raises(InvalidArgument):
            Polyline([[0, 0]])

    def test_closed_must_not_repeat_start(self):
        with pytest.raises(InvalidArgument):
            Polyline([[0, 0], [1, 0], [0, 0]], closed=True)

    def test_non_finite(self):
        with pytest.raises(InvalidArgument):
            Polyline([[0, 0], [np.nan, 1]])

    def test_closed_segments_include_closing_edge(self):
        p = Polyline([[0, 0], [4, 0], [4, 3]], closed=True)
        assert p.length() == pytest.approx(12.0)

    def test_annotation_vertex_range(self):
        Polyline(np.c_[np.arange(21), np.zeros(21)]).check_annotation()
        with pytest.raises(InvalidArgument):
            Polyline(np.c_[np.arange(22), np.zeros(22)]).check_annotation()


class TestNearestVertex:
    def test_single_closest(self):
        assert nearest_vertex(Polyline([[0, 0], [0, 10]]), (3, 0)) == (0, 3.0)

    def test_tie_goes_to_lowest_index(self):
        i, d = nearest_vertex(Polyline([[0, 0], [0, 10]]), (5, 5))
        assert i == 0
        assert d == pytest.approx(math.sqrt(50))

    def test_matches_exhaustive_scan(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            poly = random_polyline(rng)
            for p in rng.uniform(-20, 120, (50, 2)):
                best_i, best_d = 0, math.inf
                for i, v in enumerate(poly.vertices):
                    d = math.dist(v, p)
                    if d < best_d:
                        best_i, best_d = i, d
                i, d = nearest_vertex(poly, p)
                assert i == best_i
                assert d == pytest.approx(best_d, abs=1e-12)


class TestNearestPoint:
    def test_perpendicular(self):
        foot, seg, d = nearest_point_on_polyline(Polyline([[0, 0], [0, 10]]), (3, 4))
        assert foot == (0, 4) and seg == 0 and d == 3.0

    def test_clamped_to_endpoint(self):
        foot, _, d = nearest_point_on_polyline(Polyline([[0, 0], [0, 10]]), (3, 12))
        assert foot == (0, 10)
        assert d == pytest.approx(math.sqrt(13))

    def test_tie_lowest_segment(self):
        # (5, 5) is equidistant from both legs of the corner.
        _, seg, _ = nearest_point_on_polyline(Polyline([[0, 0], [10, 0], [10, 10]]), (5, 5))
        assert seg == 0

    def test_closing_segment_counts(self):
        poly = Polyline([[0, 0], [10, 0], [10, 10]], closed=True)
        _, seg, d = nearest_point_on_polyline(poly, (2, 5))
        assert seg == 2
        assert d == pytest.approx(3 / math.sqrt(2))

    @pytest.mark.parametrize("closed", [False, True])
    def test_matches_dense_sampling(self, closed):
        rng = np.random.default_rng(2)
        for _ in range(5):
            poly = random_polyline(rng, n=int(rng.integers(3, 6)), closed=closed)
            samples = dense_samples(poly)
            for p in rng.uniform(-10, 110, (10, 2)):
                oracle = np.hypot(*(samples - p).T).min()
                assert nearest_point_on_polyline(poly, p).distance == pytest.approx(oracle, abs=1e-3)

    def test_never_farther_than_nearest_vertex(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            poly = random_polyline(rng)
            p = rng.uniform(-20, 120, 2)
            assert (nearest_point_on_polyline(poly, p).distance
                    <= nearest_vertex(poly, p).distance + 1e-12)


class TestResample:
    def test_midpoint(self):
        out = resample_uniform(Polyline([[0, 0], [0, 10]]), 3)
        np.testing.assert_allclose(out.vertices, [[0, 0], [0, 5], [0, 10]])

    def test_arc_length_bookkeeping(self):
        poly = Polyline([[0, 0], [0, 4], [3, 8]])
        out = resample_uniform(poly, 21)
        assert np.array_equal(out.vertices[0], poly.vertices[0])
        assert np.array_equal(out.vertices[-1], poly.vertices[-1])
        # Independent bookkeeping: segment lengths 4 and 5, so sample i sits i * 9/20 along.
        positions = [arc_position(poly, p) for p in out.vertices]
        np.testing.assert_allclose(positions, np.arange(21) * 9.0 / 20, atol=1e-9)
        assert positions[-1] == pytest.approx(9.0, abs=1e-9)

    def test_identity_on_uniform_input(self):
        poly = Polyline(np.c_[np.zeros(6), np.arange(6) * 2.0])
        np.testing.assert_allclose(resample_uniform(poly, 6).vertices, poly.vertices, atol=1e-9)

    def test_k_too_small(self):
        with pytest.raises(InvalidArgument):
            resample_uniform(Polyline([[0, 0], [1, 0]]), 1)

    def test_closed_rejected(self):
        with pytest.raises(InvalidArgument):
            resample_uniform(Polyline([[0, 0], [1, 0], [1, 1]], closed=True), 5)

    def test_points_stay_on_polyline(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            poly = random_polyline(rng)
            out = resample_uniform(poly, int(rng.integers(2, 40)))
            for p in out.vertices:
                assert nearest_point_on_polyline(poly, p).distance < 1e-9


class TestSquareResize:
    def test_identity(self):
        assert square_resize_map(224, 224, 224) == AffineMap2(1, 1, 0, 0)

    def test_pure_downscale(self):
        m = square_resize_map(448, 448, 224)
        assert (m.scale_x, m.scale_y, m.translate_x, m.translate_y) == (0.5, 0.5, 0, 0)

    def test_padded_landscape(self):
        m = square_resize_map(400, 300, 224)
        np.testing.assert_allclose(m([[400, 300], [0, 0]]), [[224, 168], [0, 0]])

    @settings(max_examples=200, deadline=None)
    @given(w=st.integers(1, 4000), h=st.integers(1, 4000), t=st.integers(1, 1024),
           x=st.floats(-1e4, 1e4), y=st.floats(-1e4, 1e4))
    def test_inverse_round_trip(self, w, h, t, x, y):
        m = square_resize_map(w, h, t)
        back = m.inverse()(m([x, y]))
        np.testing.assert_allclose(back, [x, y], atol=1e-9, rtol=1e-12)

    def test_compose(self):
        a = AffineMap2(2, 3, 1, -1)
        b = AffineMap2(0.5, 4, -2, 7)
        p = np.array([[1.5, -2.0], [10, 20]])
        np.testing.assert_allclose(a.compose(b)(p), a(b(p)))
        np.testing.assert_allclose(a.compose(a.inverse())(p), p)

    def test_non_positive_scale(self):
        with pytest.raises(InvalidArgument):
            AffineMap2(0, 1)
        with pytest.raises(InvalidArgument):
            square_resize_map(0, 10, 224)
