import numpy as np
import pytest

from conftest import gray
from oracles import brute_hull_vertex_set

from diverid.errors import DegenerateHull
from diverid.features.shape import convex_hull, hull_centroid
from diverid.imaging import BoundingBox


class TestConvexHull:
    def test_triangle_is_its_own_hull(self):
        pts = [(0, 0), (4, 0), (2, 3)]
        hull = convex_hull(pts)
        assert {tuple(p) for p in hull.points} == {(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)}

    def test_interior_point_excluded(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
        hull = convex_hull(pts)
        assert {tuple(p) for p in hull.points} == {(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)}

    def test_collinear_boundary_point_excluded(self):
        pts = [(0, 0), (2, 0), (4, 0), (4, 4), (0, 4)]
        hull = convex_hull(pts)
        assert (2.0, 0.0) not in {tuple(p) for p in hull.points}

    def test_ccw_order_from_lowest_point(self):
        hull = convex_hull([(0, 0), (4, 0), (4, 4), (0, 4)])
        assert hull.points[0].tolist() == [0.0, 0.0]
        # counter-clockwise: positive signed area
        x = hull.points[:, 0]
        y = hull.points[:, 1]
        area2 = np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))
        assert area2 > 0

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateHull):
            convex_hull([(0, 0), (1, 1)])
        with pytest.raises(DegenerateHull):
            convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
        with pytest.raises(DegenerateHull):
            convex_hull([(1, 1), (1, 1), (1, 1)])

    def test_containment_and_brute_force_equivalence(self, rng):
        for trial in range(60):
            n = int(rng.integers(3, 31))
            pts = rng.uniform(0, 1, size=(n, 2))
            try:
                hull = convex_hull(pts)
            except DegenerateHull:
                continue
            hp = hull.points
            m = len(hp)
            # every input point on the inner side of every directed hull edge
            for p in pts:
                for e in range(m):
                    a, b = hp[e], hp[(e + 1) % m]
                    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
                    assert cross >= -1e-9, (trial, p)
            assert {tuple(v) for v in hp} == brute_hull_vertex_set(pts)

    def test_idempotence(self, rng):
        pts = rng.uniform(0, 10, size=(25, 2))
        h1 = convex_hull(pts)
        h2 = convex_hull(h1.points)
        assert np.array_equal(h1.points, h2.points)


class TestHullCentroid:
    def test_all_dark_crop_gives_sentinel(self):
        img = gray(np.full((20, 20), 30))
        d = hull_centroid(img, BoundingBox(0, 0, 20, 20))
        assert d.centroid == (0.5, 0.5)

    def test_centered_square_is_centered(self):
        data = np.full((21, 21), 10, np.uint8)
        data[6:15, 6:15] = 200
        d = hull_centroid(gray(data), BoundingBox(0, 0, 21, 21))
        assert d.centroid[0] == pytest.approx(0.5, abs=0.05)
        assert d.centroid[1] == pytest.approx(0.5, abs=0.05)

    def test_matches_staged_pipeline(self, rng):
        from diverid.features.shape import convex_hull as hull_of
        from diverid.features.shape import trace_contours
        from diverid.imaging import binarize, crop

        data = np.full((24, 30), 20, np.uint8)
        data[3:10, 4:12] = 180  # blob one
        data[14:21, 16:27] = 220  # blob two
        img = gray(data)
        box = BoundingBox(0, 0, 30, 24)
        d = hull_centroid(img, box)

        contours, _ = trace_contours(binarize(crop(img, box), 50))
        vertices = []
        for c in contours:
            vertices.extend(hull_of(c.points).points.tolist())
        ex = sum(v[0] for v in vertices) / len(vertices) / 30
        ey = sum(v[1] for v in vertices) / len(vertices) / 24
        assert d.centroid == pytest.approx((ex, ey), abs=1e-9)

    def test_raw_mode_sentinel_is_box_center(self):
        img = gray(np.full((10, 16), 0))
        d = hull_centroid(img, BoundingBox(0, 0, 16, 10), normalized=False)
        assert d.centroid == (8.0, 5.0)
