"""Quadrant-average LAB color descriptor.

Each bounding box is split into four rectangles at the floor midpoints and
the per-region average of (l + a + b) forms a 4-value descriptor. Averaging
keeps the descriptor stable when the subject's apparent size changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateRegion
from ..imaging import BoundingBox, ColorSpace, ImageBuffer, _require, crop


@dataclass(frozen=True)
class ColorDescriptor:
    """Average (l + a + b) per quadrant: top-left, top-right, bottom-left, bottom-right."""

    mu: tuple[float, float, float, float]


def quadrant_color_means(img: ImageBuffer, box: BoundingBox) -> ColorDescriptor:
    """Mean of l + a + b over each quadrant of ``box``.

    The split uses floor midpoints, so odd boxes give the extra row/column to
    the bottom/right quadrants. Boxes narrower or shorter than 2 pixels
    cannot be split and raise DegenerateRegion.
    """
    _require(img, ColorSpace.LAB_F32, "quadrant_color_means")
    if box.width < 2 or box.height < 2:
        raise DegenerateRegion(f"box {box} is too small to split into quadrants")
    summed = crop(img, box).data.astype(np.float64).sum(axis=2)
    mx = box.width // 2
    my = box.height // 2
    quads = (
        summed[:my, :mx],
        summed[:my, mx:],
        summed[my:, :mx],
        summed[my:, mx:],
    )
    return ColorDescriptor(mu=tuple(float(q.mean()) for q in quads))
