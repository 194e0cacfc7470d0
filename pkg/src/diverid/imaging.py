"""Pixel-level primitives: color conversion, smoothing, thresholding, cropping.

Every operation is a pure function; inputs are never mutated and outputs are
freshly allocated buffers, so concurrent use on shared images is safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BoxOutOfBounds, ContractViolation


class ColorSpace(enum.Enum):
    RGB8 = "rgb8"
    GRAY8 = "gray8"
    LAB_F32 = "lab_f32"
    BINARY = "binary"

    @property
    def channels(self) -> int:
        return 3 if self in (ColorSpace.RGB8, ColorSpace.LAB_F32) else 1


_DTYPES = {
    ColorSpace.RGB8: np.uint8,
    ColorSpace.GRAY8: np.uint8,
    ColorSpace.BINARY: np.uint8,
    ColorSpace.LAB_F32: np.float32,
}


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """An owned raster in a declared color space.

    ``data`` is row-major and channel-interleaved: shape (h, w) for
    single-channel spaces, (h, w, 3) otherwise. Treat buffers as immutable.
    """

    width: int
    height: int
    color_space: ColorSpace
    data: np.ndarray

    def __post_init__(self):
        cs = self.color_space
        expected = (self.height, self.width) if cs.channels == 1 else (self.height, self.width, 3)
        if self.data.shape != expected:
            raise ContractViolation(
                f"{cs.name} buffer must have shape {expected}, got {self.data.shape}"
            )
        if self.data.dtype != _DTYPES[cs]:
            raise ContractViolation(
                f"{cs.name} buffer must be {np.dtype(_DTYPES[cs]).name}, got {self.data.dtype}"
            )
        if cs is ColorSpace.BINARY:
            d = self.data
            if not (((d == 0) | (d == 255)).all()):
                raise ContractViolation("BINARY samples must be 0 or 255")
        elif cs is ColorSpace.LAB_F32:
            d = self.data
            if not np.isfinite(d).all():
                raise ContractViolation("LAB samples must be finite")
            if d[..., 0].min() < 0.0 or d[..., 0].max() > 100.0:
                raise ContractViolation("LAB L channel must lie in [0, 100]")
            ab = d[..., 1:]
            if ab.min() < -128.0 or ab.max() > 127.0:
                raise ContractViolation("LAB a/b channels must lie in [-128, 127]")

    @classmethod
    def from_array(cls, data: np.ndarray, color_space: ColorSpace) -> "ImageBuffer":
        data = np.ascontiguousarray(data)
        h, w = data.shape[:2]
        return cls(width=w, height=h, color_space=color_space, data=data)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box, half-open on the max edges."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        for v in (self.x_min, self.y_min, self.x_max, self.y_max):
            if not isinstance(v, (int, np.integer)):
                raise ContractViolation(f"box coordinates must be integers, got {v!r}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ContractViolation(f"box must have positive extent, got {self}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    def within(self, width: int, height: int) -> bool:
        return self.x_min >= 0 and self.y_min >= 0 and self.x_max <= width and self.y_max <= height


def _require(img: ImageBuffer, space: ColorSpace, op: str):
    if img.color_space is not space:
        raise ContractViolation(f"{op} expects {space.name} input, got {img.color_space.name}")


# sRGB <-> XYZ (D65, 2 degree observer)
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.array(
    [
        [3.2404542, -1.5371385, -0.4985314],
        [-0.9692660, 1.8760108, 0.0415560],
        [0.0556434, -0.2040259, 1.0572252],
    ]
)
_WHITE = np.array([0.95047, 1.0, 1.08883])
_DELTA = 6.0 / 29.0


def rgb_to_lab(img: ImageBuffer) -> ImageBuffer:
    """Convert RGB8 to CIE L*a*b* (D65 white, sRGB companding)."""
    _require(img, ColorSpace.RGB8, "rgb_to_lab")
    rgb = img.data.astype(np.float64) / 255.0
    linear = np.where(rgb > 0.04045, ((rgb + 0.055) / 1.055) ** 2.4, rgb / 12.92)
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _WHITE
    f = np.where(t > _DELTA**3, np.cbrt(t), t / (3.0 * _DELTA**2) + 4.0 / 29.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    lab[..., 0] = np.clip(lab[..., 0], 0.0, 100.0)
    lab[..., 1:] = np.clip(lab[..., 1:], -128.0, 127.0)
    return ImageBuffer.from_array(lab.astype(np.float32), ColorSpace.LAB_F32)


def lab_to_rgb(img: ImageBuffer) -> ImageBuffer:
    """Inverse of :func:`rgb_to_lab`; out-of-gamut values are clamped."""
    _require(img, ColorSpace.LAB_F32, "lab_to_rgb")
    lab = img.data.astype(np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    f = np.stack([fx, fy, fz], axis=-1)
    t = np.where(f > _DELTA, f**3, 3.0 * _DELTA**2 * (f - 4.0 / 29.0))
    xyz = t * _WHITE
    linear = xyz @ _XYZ_TO_RGB.T
    rgb = np.where(linear > 0.0031308, 1.055 * np.maximum(linear, 0.0) ** (1 / 2.4) - 0.055, 12.92 * linear)
    out = np.floor(np.clip(rgb, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    return ImageBuffer.from_array(out, ColorSpace.RGB8)


def to_grayscale(img: ImageBuffer) -> ImageBuffer:
    """BT.601 luminance: round(0.299 R + 0.587 G + 0.114 B)."""
    _require(img, ColorSpace.RGB8, "to_grayscale")
    rgb = img.data.astype(np.float64)
    lum = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    out = np.clip(np.floor(lum + 0.5), 0.0, 255.0).astype(np.uint8)
    return ImageBuffer.from_array(out, ColorSpace.GRAY8)


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian taps with radius ceil(3 sigma)."""
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ContractViolation(f"sigma must be positive, got {sigma}")
    radius = math.ceil(3.0 * sigma)
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(d * d) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(img: ImageBuffer, sigma: float) -> ImageBuffer:
    """Separable Gaussian smoothing with replicated borders."""
    _require(img, ColorSpace.GRAY8, "gaussian_blur")
    kernel = gaussian_kernel1d(sigma)
    blurred = kernels.sep_convolve(img.data.astype(np.float64), kernel)
    out = np.clip(np.floor(blurred + 0.5), 0.0, 255.0).astype(np.uint8)
    return ImageBuffer.from_array(out, ColorSpace.GRAY8)


def binarize(img: ImageBuffer, threshold: int) -> ImageBuffer:
    """Suppress pixels at or below ``threshold``: output is 0 there, 255 elsewhere."""
    _require(img, ColorSpace.GRAY8, "binarize")
    if not 0 <= threshold <= 255:
        raise ContractViolation(f"threshold must lie in [0, 255], got {threshold}")
    out = np.where(img.data <= threshold, 0, 255).astype(np.uint8)
    return ImageBuffer.from_array(out, ColorSpace.BINARY)


def crop(img: ImageBuffer, box: BoundingBox) -> ImageBuffer:
    """Extract the sub-image under ``box`` (same color space)."""
    if not box.within(img.width, img.height):
        raise BoxOutOfBounds(
            f"box {box} exceeds {img.width}x{img.height} frame", boxes=[box]
        )
    data = img.data[box.y_min : box.y_max, box.x_min : box.x_max]
    return ImageBuffer.from_array(data.copy(), img.color_space)


def full_box(img: ImageBuffer) -> BoundingBox:
    """The box covering the whole image."""
    return BoundingBox(0, 0, img.width, img.height)
