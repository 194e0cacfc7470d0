import numpy as np
import pytest

from conftest import lab

from diverid.errors import DegenerateRegion
from diverid.features.color import quadrant_color_means
from diverid.imaging import BoundingBox


def brute_quadrant_means(data, box):
    """Double-loop reimplementation of the quadrant averages."""
    mx = box.x_min + box.width // 2
    my = box.y_min + box.height // 2
    regions = [
        (box.y_min, my, box.x_min, mx),
        (box.y_min, my, mx, box.x_max),
        (my, box.y_max, box.x_min, mx),
        (my, box.y_max, mx, box.x_max),
    ]
    out = []
    for y0, y1, x0, x1 in regions:
        total = 0.0
        count = 0
        for y in range(y0, y1):
            for x in range(x0, x1):
                total += float(data[y, x, 0]) + float(data[y, x, 1]) + float(data[y, x, 2])
                count += 1
        out.append(total / count)
    return out


def test_uniform_field():
    data = np.zeros((8, 8, 3), np.float32)
    data[..., 0] = 50.0
    data[..., 1] = 10.0
    data[..., 2] = -10.0
    d = quadrant_color_means(lab(data), BoundingBox(0, 0, 8, 8))
    assert d.mu == pytest.approx((50.0, 50.0, 50.0, 50.0))


def test_left_right_split():
    data = np.zeros((4, 8, 3), np.float32)
    data[:, 4:, 0] = 100.0
    d = quadrant_color_means(lab(data), BoundingBox(0, 0, 8, 4))
    assert d.mu == pytest.approx((0.0, 100.0, 0.0, 100.0))


def test_matches_brute_force(rng):
    data = rng.uniform(-20, 80, size=(6, 6, 3)).astype(np.float32)
    data[..., 0] = np.abs(data[..., 0])
    box = BoundingBox(0, 0, 6, 6)
    d = quadrant_color_means(lab(data), box)
    expect = brute_quadrant_means(data, box)
    for got, want in zip(d.mu, expect):
        assert got == pytest.approx(want, rel=1e-6)


def test_odd_box_extra_goes_bottom_right():
    data = np.zeros((5, 5, 3), np.float32)
    data[:, 2:, 0] = 60.0  # columns 2..4 bright
    d = quadrant_color_means(lab(data), BoundingBox(0, 0, 5, 5))
    # left quadrants cover columns 0..1 only, right quadrants columns 2..4
    assert d.mu[0] == pytest.approx(0.0)
    assert d.mu[1] == pytest.approx(60.0)


def test_degenerate_box_rejected():
    data = np.zeros((4, 4, 3), np.float32)
    with pytest.raises(DegenerateRegion):
        quadrant_color_means(lab(data), BoundingBox(0, 0, 1, 4))


def test_scale_invariance_under_2x_replication(rng):
    data = rng.uniform(0, 90, size=(6, 8, 3)).astype(np.float32)
    up = np.repeat(np.repeat(data, 2, axis=0), 2, axis=1)
    d1 = quadrant_color_means(lab(data), BoundingBox(0, 0, 8, 6))
    d2 = quadrant_color_means(lab(up), BoundingBox(0, 0, 16, 12))
    for a, b in zip(d1.mu, d2.mu):
        assert a == pytest.approx(b, rel=1e-6)


def test_permuting_within_quadrant_is_invariant(rng):
    data = rng.uniform(0, 90, size=(8, 8, 3)).astype(np.float32)
    before = quadrant_color_means(lab(data), BoundingBox(0, 0, 8, 8))
    shuffled = data.copy()
    flat = shuffled[:4, :4].reshape(-1, 3)
    shuffled[:4, :4] = rng.permutation(flat).reshape(4, 4, 3)
    after = quadrant_color_means(lab(shuffled), BoundingBox(0, 0, 8, 8))
    assert after.mu[0] == pytest.approx(before.mu[0], rel=1e-6)


def test_whole_box_mean_is_weighted_quadrant_mean(rng):
    data = rng.uniform(0, 90, size=(7, 9, 3)).astype(np.float32)
    box = BoundingBox(0, 0, 9, 7)
    d = quadrant_color_means(lab(data), box)
    mx, my = box.width // 2, box.height // 2
    counts = [my * mx, my * (box.width - mx), (box.height - my) * mx, (box.height - my) * (box.width - mx)]
    weighted = sum(m * c for m, c in zip(d.mu, counts)) / sum(counts)
    whole = float(data.astype(np.float64).sum(axis=2).mean())
    assert weighted == pytest.approx(whole, rel=1e-6)
