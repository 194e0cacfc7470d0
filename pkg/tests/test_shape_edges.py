import numpy as np
import pytest

from conftest import binary, gray
from oracles import canny_reference, polyline_deviation

from diverid.errors import ContractViolation
from diverid.features.shape import (
    Contour,
    canny_edges,
    edge_centroid,
    rdp_simplify,
    trace_contours,
)
from diverid.imaging import BoundingBox


def disk_image(size=32, radius=10, value=200):
    data = np.zeros((size, size), np.uint8)
    yy, xx = np.mgrid[0:size, 0:size]
    c = (size - 1) / 2
    data[(xx - c) ** 2 + (yy - c) ** 2 <= radius**2] = value
    return data


class TestCanny:
    def test_constant_image_has_no_edges(self):
        out = canny_edges(gray(np.full((16, 16), 80)), 50, 150)
        assert (out.data == 0).all()

    def test_vertical_step_is_single_pixel_line(self):
        data = np.zeros((20, 20), np.uint8)
        data[:, 10:] = 255
        out = canny_edges(gray(data), 50, 150, sigma=None).data
        interior = out[2:-2, :]
        assert (interior.sum(axis=1) == 255).all()  # one edge pixel per row

    def test_blurred_step_is_still_one_pixel_wide(self):
        data = np.zeros((24, 24), np.uint8)
        data[:, 12:] = 255
        out = canny_edges(gray(data), 50, 150, sigma=1.4).data
        interior = out[4:-4, :]
        assert (interior.sum(axis=1) == 255).all()

    def test_horizontal_step_is_single_pixel_line(self):
        data = np.zeros((20, 20), np.uint8)
        data[10:, :] = 255
        out = canny_edges(gray(data), 50, 150, sigma=None).data
        interior = out[:, 2:-2]
        assert (interior.sum(axis=0) == 255).all()

    def test_disk_matches_staged_reference_exactly(self):
        data = disk_image()
        got = canny_edges(gray(data), 50, 150, sigma=1.4).data
        want = canny_reference(data, 50, 150, sigma=1.4)
        assert np.array_equal(got, want)

    def test_disk_matches_reference_without_smoothing(self):
        data = disk_image(size=24, radius=8)
        got = canny_edges(gray(data), 40, 120, sigma=None).data
        want = canny_reference(data, 40, 120, sigma=None)
        assert np.array_equal(got, want)

    def test_threshold_contract(self):
        img = gray(np.zeros((8, 8)))
        with pytest.raises(ContractViolation):
            canny_edges(img, 150, 50)
        with pytest.raises(ContractViolation):
            canny_edges(img, -1, 50)


class TestTraceContours:
    def test_empty_image(self):
        contours, parents = trace_contours(binary(np.zeros((8, 8))))
        assert contours == [] and parents == []

    def test_filled_rectangle_compresses_to_corners(self):
        data = np.zeros((10, 12), np.uint8)
        data[2:7, 3:9] = 255
        contours, parents = trace_contours(binary(data))
        assert len(contours) == 1
        assert parents == [None]
        corners = {tuple(p) for p in contours[0].points}
        assert corners == {(3.0, 2.0), (8.0, 2.0), (8.0, 6.0), (3.0, 6.0)}

    def test_hole_hierarchy(self):
        data = np.zeros((12, 12), np.uint8)
        data[2:10, 2:10] = 255
        data[4:8, 4:8] = 0
        contours, parents = trace_contours(binary(data))
        assert len(contours) == 2
        assert parents[0] is None
        assert parents[1] == 0

    def test_nested_three_levels(self):
        data = np.zeros((20, 20), np.uint8)
        data[1:19, 1:19] = 255  # outer blob
        data[4:16, 4:16] = 0  # hole
        data[7:13, 7:13] = 255  # island inside the hole
        contours, parents = trace_contours(binary(data))
        assert len(contours) == 3
        assert parents[0] is None
        assert parents[1] == 0  # hole inside outer
        assert parents[2] == 1  # island inside hole

    def test_two_separate_blobs_are_siblings(self):
        data = np.zeros((10, 20), np.uint8)
        data[2:6, 2:6] = 255
        data[2:6, 10:16] = 255
        contours, parents = trace_contours(binary(data))
        assert len(contours) == 2
        assert parents == [None, None]

    def test_single_pixel_discarded(self):
        data = np.zeros((5, 5), np.uint8)
        data[2, 2] = 255
        contours, _ = trace_contours(binary(data))
        assert contours == []

    def test_one_pixel_line_compresses_to_endpoints(self):
        data = np.zeros((5, 9), np.uint8)
        data[2, 1:8] = 255
        contours, _ = trace_contours(binary(data))
        assert len(contours) == 1
        pts = {tuple(p) for p in contours[0].points}
        assert pts == {(1.0, 2.0), (7.0, 2.0)}

    def test_consecutive_points_eight_connected(self, rng):
        data = (rng.uniform(size=(24, 24)) > 0.55).astype(np.uint8) * 255
        contours, _ = trace_contours(binary(data))
        for c in contours:
            # compression only removes mid-run points, so gaps stay on the run's line
            diffs = np.abs(np.diff(c.points, axis=0))
            steps = diffs.max(axis=1)
            assert (steps >= 1).all()


class TestRdp:
    def test_collinear_collapses_to_endpoints(self):
        c = Contour(points=np.array([[0, 0], [1, 1], [2, 2], [3, 3]], float))
        out = rdp_simplify(c, 0.1)
        assert out.points.tolist() == [[0, 0], [3, 3]]

    def test_apex_above_epsilon_is_kept(self):
        c = Contour(points=np.array([[0, 0], [5, 5], [10, 0]], float))
        out = rdp_simplify(c, 1.0)
        assert out.points.tolist() == [[0, 0], [5, 5], [10, 0]]

    def test_deviation_bound_on_random_polyline(self, rng):
        pts = np.cumsum(rng.uniform(-3, 3, size=(50, 2)), axis=0)
        c = Contour(points=pts)
        eps = 2.0
        out = rdp_simplify(c, eps)
        assert polyline_deviation(pts, out.points) <= eps

    def test_epsilon_zero_keeps_everything_non_collinear(self):
        pts = np.array([[0, 0], [1, 2], [2, 0], [3, 2]], float)
        out = rdp_simplify(Contour(points=pts), 0.0)
        assert out.points.tolist() == pts.tolist()

    def test_negative_epsilon_rejected(self):
        with pytest.raises(ContractViolation):
            rdp_simplify(Contour(points=np.zeros((2, 2))), -1.0)


class TestEdgeCentroid:
    def test_symmetric_square(self):
        c = Contour(points=np.array([[0, 0], [10, 0], [10, 10], [0, 10]], float))
        d = edge_centroid([c], BoundingBox(0, 0, 10, 10))
        assert d.centroid == pytest.approx((0.5, 0.5))

    def test_single_point_normalization(self):
        c = Contour(points=np.array([[2, 8], [2, 8]], float))
        d = edge_centroid([c], BoundingBox(0, 0, 10, 10))
        assert d.centroid == pytest.approx((0.2, 0.8))

    def test_sentinel_for_empty(self):
        d = edge_centroid([], BoundingBox(0, 0, 10, 10))
        assert d.centroid == (0.5, 0.5)

    def test_raw_mode(self):
        c = Contour(points=np.array([[2, 8], [4, 2]], float))
        d = edge_centroid([c], BoundingBox(0, 0, 10, 10), normalized=False)
        assert d.centroid == pytest.approx((3.0, 5.0))

    def test_matches_flat_mean(self, rng):
        contours = [
            Contour(points=rng.uniform(0, 20, size=(rng.integers(2, 8), 2)))
            for _ in range(3)
        ]
        d = edge_centroid(contours, BoundingBox(0, 0, 20, 20))
        allpts = [p for c in contours for p in c.points]
        ex = sum(p[0] for p in allpts) / len(allpts) / 20
        ey = sum(p[1] for p in allpts) / len(allpts) / 20
        assert d.centroid == pytest.approx((ex, ey), abs=1e-9)
