"""Spectral amplitude descriptor from the 2D discrete Fourier transform.

A crop is resampled to a fixed square grid so descriptors are comparable
across boxes of different sizes, then the mean amplitude of the unnormalized
forward transform is taken per RGB channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import ContractViolation
from ..imaging import BoundingBox, ColorSpace, ImageBuffer, _require, crop

DEFAULT_SPECTRUM_SIZE = 128


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Mean spectral amplitude for the R, G, B channels."""

    amp: tuple[float, float, float]


def dft2d(channel: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2D DFT of a real or complex M x N matrix.

    F(k, l) = sum_ij f(i, j) exp(-i 2 pi (k i / M + l j / N)). Power-of-two
    axes go through the radix-2 FFT, other lengths through a direct
    per-axis transform.
    """
    a = np.asarray(channel)
    if a.ndim != 2 or a.size == 0:
        raise ContractViolation(f"dft2d needs a nonempty 2D matrix, got shape {a.shape}")
    return kernels.dft2d(a.astype(np.complex128))


def resize_nearest(channel: np.ndarray, size: int) -> np.ndarray:
    """Nearest-neighbor resample of a 2D array to size x size (pixel-center mapping)."""
    h, w = channel.shape
    rows = np.minimum(((np.arange(size) + 0.5) * h / size).astype(np.int64), h - 1)
    cols = np.minimum(((np.arange(size) + 0.5) * w / size).astype(np.int64), w - 1)
    return channel[np.ix_(rows, cols)]


def average_amplitude(
    img: ImageBuffer,
    box: BoundingBox,
    size: int = DEFAULT_SPECTRUM_SIZE,
    include_dc: bool = True,
) -> SpectrumDescriptor:
    """Mean |F| over all spectrum bins of the resized crop, per RGB channel.

    ``include_dc=False`` drops the F(0, 0) term from the sum (the divisor
    stays size^2 so the two modes remain on the same scale).
    """
    _require(img, ColorSpace.RGB8, "average_amplitude")
    if size < 1:
        raise ContractViolation(f"spectrum size must be >= 1, got {size}")
    patch = crop(img, box).data.astype(np.float64)
    amps = []
    for c in range(3):
        resized = resize_nearest(patch[:, :, c], size)
        spectrum = np.abs(kernels.dft2d(resized.astype(np.complex128)))
        total = spectrum.sum()
        if not include_dc:
            total -= spectrum[0, 0]
        amps.append(float(total / (size * size)))
    return SpectrumDescriptor(amp=tuple(amps))
