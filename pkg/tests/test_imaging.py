import numpy as np
import pytest

from conftest import gray, rgb
from oracles import dense_convolve2d, srgb_to_lab_scalar

from diverid.errors import BoxOutOfBounds, ContractViolation
from diverid.imaging import (
    BoundingBox,
    ColorSpace,
    ImageBuffer,
    binarize,
    crop,
    full_box,
    gaussian_blur,
    gaussian_kernel1d,
    lab_to_rgb,
    rgb_to_lab,
    to_grayscale,
)


class TestImageBuffer:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ContractViolation):
            ImageBuffer(width=4, height=4, color_space=ColorSpace.GRAY8, data=np.zeros((4, 5), np.uint8))

    def test_binary_values_validated(self):
        with pytest.raises(ContractViolation):
            ImageBuffer.from_array(np.full((3, 3), 7, np.uint8), ColorSpace.BINARY)

    def test_lab_range_validated(self):
        bad = np.zeros((2, 2, 3), np.float32)
        bad[0, 0, 0] = 101.0
        with pytest.raises(ContractViolation):
            ImageBuffer.from_array(bad, ColorSpace.LAB_F32)


class TestBoundingBox:
    def test_rejects_empty_box(self):
        with pytest.raises(ContractViolation):
            BoundingBox(5, 5, 5, 9)

    def test_rejects_floats(self):
        with pytest.raises(ContractViolation):
            BoundingBox(0.5, 0, 4, 4)

    def test_dimensions(self):
        box = BoundingBox(2, 3, 10, 7)
        assert (box.width, box.height) == (8, 4)


class TestRgbToLab:
    def test_white_maps_to_L100(self):
        img = rgb(np.full((2, 2, 3), 255))
        out = rgb_to_lab(img).data
        assert out[0, 0, 0] == pytest.approx(100.0, abs=1e-3)
        assert abs(out[0, 0, 1]) < 0.5
        assert abs(out[0, 0, 2]) < 0.5

    def test_black_maps_to_zero(self):
        out = rgb_to_lab(rgb(np.zeros((2, 2, 3)))).data
        assert np.allclose(out, 0.0, atol=1e-6)

    def test_matches_scalar_reference(self):
        colors = [(255, 0, 0), (0, 255, 0), (0, 0, 255), (12, 200, 99), (130, 130, 131)]
        img = rgb(np.array([colors], dtype=np.uint8))
        out = rgb_to_lab(img).data[0]
        for i, (r, g, b) in enumerate(colors):
            expect = srgb_to_lab_scalar(r, g, b)
            for c in range(3):
                assert out[i, c] == pytest.approx(expect[c], abs=0.1)

    def test_wrong_space_rejected(self):
        with pytest.raises(ContractViolation):
            rgb_to_lab(gray(np.zeros((2, 2))))

    def test_round_trip_within_one(self, rng):
        data = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
        img = rgb(data)
        back = lab_to_rgb(rgb_to_lab(img)).data
        assert np.abs(back.astype(int) - data.astype(int)).max() <= 1


class TestGrayscale:
    def test_white_and_black(self):
        img = rgb([[[255, 255, 255], [0, 0, 0]]])
        assert to_grayscale(img).data.tolist() == [[255, 0]]

    def test_stated_weights(self):
        img = rgb([[[100, 150, 200]]])
        assert to_grayscale(img).data[0, 0] == 141  # round(29.9 + 88.05 + 22.8)


class TestGaussianBlur:
    def test_constant_preserved(self):
        img = gray(np.full((9, 9), 137))
        assert (gaussian_blur(img, 2.0).data == 137).all()

    def test_impulse_center_is_max_and_mass_preserved(self):
        data = np.zeros((15, 15), np.uint8)
        data[7, 7] = 255
        out = gaussian_blur(gray(data), 1.0).data
        assert out[7, 7] == out.max()
        assert abs(int(out.sum(dtype=np.int64)) - 255) <= out.size  # rounding slack

    def test_matches_dense_convolution(self, rng):
        data = rng.integers(0, 256, size=(5, 5), dtype=np.uint8)
        k1 = gaussian_kernel1d(1.0)
        dense = dense_convolve2d(data.astype(np.float64), np.outer(k1, k1))
        expect = np.clip(np.floor(dense + 0.5), 0, 255)
        out = gaussian_blur(gray(data), 1.0).data
        assert np.abs(out.astype(int) - expect.astype(int)).max() <= 1

    def test_linear_in_integer_scale(self, rng):
        base = rng.integers(0, 64, size=(12, 12), dtype=np.uint8)
        a = 3
        lhs = gaussian_blur(gray(base * a), 1.2).data.astype(int)
        rhs = a * gaussian_blur(gray(base), 1.2).data.astype(int)
        assert np.abs(lhs - rhs).max() <= a  # one rounding step each side

    def test_sigma_validated(self):
        with pytest.raises(ContractViolation):
            gaussian_blur(gray(np.zeros((3, 3))), 0.0)


class TestBinarize:
    def test_all_dark_goes_to_zero(self):
        assert (binarize(gray(np.zeros((4, 4))), 50).data == 0).all()

    def test_all_bright_goes_to_255(self):
        assert (binarize(gray(np.full((4, 4), 255)), 50).data == 255).all()

    def test_boundary_is_suppressed(self):
        img = gray([[40, 50, 51, 200]])
        assert binarize(img, 50).data.tolist() == [[0, 0, 255, 255]]

    def test_idempotent(self, rng):
        data = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
        once = binarize(gray(data), 50)
        twice = binarize(gray(once.data), 50)
        assert (once.data == twice.data).all()


class TestCrop:
    def test_full_frame_crop_is_identity(self, rng):
        data = rng.integers(0, 256, size=(6, 7, 3), dtype=np.uint8)
        img = rgb(data)
        assert (crop(img, full_box(img)).data == data).all()

    def test_dimensions_and_content(self):
        data = np.arange(24, dtype=np.uint8).reshape(4, 6)
        out = crop(gray(data), BoundingBox(1, 2, 4, 4))
        assert out.width == 3 and out.height == 2
        assert (out.data == data[2:4, 1:4]).all()

    def test_out_of_bounds_carries_box(self):
        img = gray(np.zeros((4, 4)))
        box = BoundingBox(2, 2, 6, 4)
        with pytest.raises(BoxOutOfBounds) as info:
            crop(img, box)
        assert info.value.boxes == [box]
