import numpy as np
import pytest

from conftest import gray

from diverid.errors import ZeroMass
from diverid.features.shape import central_moments, hu_moments
from diverid.imaging import BoundingBox, full_box


def brute_moments(data):
    """Double-loop raw and central moments."""
    h, w = data.shape
    m = {}
    for p in range(4):
        for q in range(4):
            if p + q > 3:
                continue
            m[(p, q)] = sum(
                (x**p) * (y**q) * float(data[y, x]) for y in range(h) for x in range(w)
            )
    cx = m[(1, 0)] / m[(0, 0)]
    cy = m[(0, 1)] / m[(0, 0)]
    mu = {}
    for p in range(4):
        for q in range(4):
            if p + q > 3:
                continue
            mu[(p, q)] = sum(
                ((x - cx) ** p) * ((y - cy) ** q) * float(data[y, x])
                for y in range(h)
                for x in range(w)
            )
    return m, (cx, cy), mu


class TestCentralMoments:
    def test_single_pixel(self):
        data = np.zeros((8, 8), np.uint8)
        data[4, 3] = 255
        mom = central_moments(gray(data), BoundingBox(0, 0, 8, 8))
        assert mom.centroid == pytest.approx((3.0, 4.0))
        for (p, q), value in mom.mu.items():
            if p + q >= 1:
                assert value == pytest.approx(0.0, abs=1e-9)

    def test_two_point_mass(self):
        data = np.zeros((4, 4), np.uint8)
        data[0, 0] = 100
        data[0, 2] = 100
        mom = central_moments(gray(data), BoundingBox(0, 0, 4, 4))
        assert mom.centroid == pytest.approx((1.0, 0.0))
        assert mom.mu[(2, 0)] == pytest.approx(2 * 100.0)
        assert mom.mu[(0, 2)] == pytest.approx(0.0)

    def test_matches_brute_force(self, rng):
        data = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
        mom = central_moments(gray(data), BoundingBox(0, 0, 8, 8))
        m, centroid, mu = brute_moments(data)
        assert mom.centroid == pytest.approx(centroid, rel=1e-12)
        for key in mu:
            assert mom.raw[key] == pytest.approx(m[key], rel=1e-9)
            assert mom.mu[key] == pytest.approx(mu[key], rel=1e-9, abs=1e-6)

    def test_zero_mass_raises(self):
        data = np.zeros((6, 6), np.uint8)
        with pytest.raises(ZeroMass):
            central_moments(gray(data), BoundingBox(0, 0, 6, 6))

    def test_box_local_coordinates(self):
        data = np.zeros((10, 10), np.uint8)
        data[5, 6] = 9
        mom = central_moments(gray(data), BoundingBox(4, 3, 10, 10))
        assert mom.centroid == pytest.approx((2.0, 2.0))


def random_patch_image(rng, size=24, patch=8):
    """A random patch at a random offset inside a zero frame."""
    data = np.zeros((size, size), np.uint8)
    content = rng.integers(1, 256, size=(patch, patch), dtype=np.uint8)
    oy, ox = rng.integers(0, size - patch, size=2)
    data[oy : oy + patch, ox : ox + patch] = content
    return data, content


class TestHuMoments:
    def test_translation_invariance(self, rng):
        content = rng.integers(1, 256, size=(8, 8), dtype=np.uint8)
        a = np.zeros((32, 32), np.uint8)
        b = np.zeros((32, 32), np.uint8)
        a[2:10, 3:11] = content
        b[17:25, 20:28] = content
        ha = hu_moments(gray(a), full_box(gray(a))).hu
        hb = hu_moments(gray(b), full_box(gray(b))).hu
        for x, y in zip(ha, hb):
            assert x == pytest.approx(y, rel=1e-12)

    def test_rotation_90_invariance(self, rng):
        data = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        rot = np.rot90(data).copy()
        h0 = hu_moments(gray(data), BoundingBox(0, 0, 16, 16)).hu
        h1 = hu_moments(gray(rot), BoundingBox(0, 0, 16, 16)).hu
        for x, y in zip(h0, h1):
            assert x == pytest.approx(y, rel=1e-9)

    def test_upscale_invariance(self, rng):
        data = rng.integers(0, 256, size=(12, 12), dtype=np.uint8)
        up = np.repeat(np.repeat(data, 2, axis=0), 2, axis=1)
        h0 = hu_moments(gray(data), BoundingBox(0, 0, 12, 12)).hu
        h1 = hu_moments(gray(up), BoundingBox(0, 0, 24, 24)).hu
        for x, y in zip(h0, h1):
            assert x == pytest.approx(y, rel=5e-2, abs=1e-12)

    def test_disk_kills_anisotropic_terms(self):
        size = 41
        data = np.zeros((size, size), np.uint8)
        yy, xx = np.mgrid[0:size, 0:size]
        c = (size - 1) / 2
        data[(xx - c) ** 2 + (yy - c) ** 2 <= 15**2] = 200
        hu = hu_moments(gray(data), BoundingBox(0, 0, size, size)).hu
        assert hu[0] > 0
        for h in hu[1:]:
            assert abs(h) < 1e-3 * hu[0]
