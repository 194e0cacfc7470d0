import numpy as np
import pytest

from diverid.clustering import FeatureVector
from diverid.imaging import ColorSpace, ImageBuffer


def gray(arr) -> ImageBuffer:
    return ImageBuffer.from_array(np.asarray(arr, dtype=np.uint8), ColorSpace.GRAY8)


def rgb(arr) -> ImageBuffer:
    return ImageBuffer.from_array(np.asarray(arr, dtype=np.uint8), ColorSpace.RGB8)


def lab(arr) -> ImageBuffer:
    return ImageBuffer.from_array(np.asarray(arr, dtype=np.float32), ColorSpace.LAB_F32)


def binary(arr) -> ImageBuffer:
    return ImageBuffer.from_array(np.asarray(arr, dtype=np.uint8), ColorSpace.BINARY)


def fv(dims, frame_index=0, detection_index=0) -> FeatureVector:
    dims = np.asarray(dims, dtype=np.float64)
    if dims.shape != (18,):
        padded = np.zeros(18)
        padded[: dims.shape[0]] = dims
        dims = padded
    return FeatureVector(dims=dims, frame_index=frame_index, detection_index=detection_index)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
