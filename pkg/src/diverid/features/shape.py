"""Shape descriptors: edge contours, convex hulls, and invariant moments.

The edge path runs Canny, traces the resulting map into contours, simplifies
each with Ramer-Douglas-Peucker and averages the surviving points. The hull
path thresholds dark pixels away, traces contours and averages gift-wrapped
hull vertices. Hu's seven moment invariants are computed on the grayscale
crop directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import kernels
from ..errors import ContractViolation, DegenerateHull, ZeroMass
from ..imaging import (
    BoundingBox,
    ColorSpace,
    ImageBuffer,
    _require,
    binarize,
    crop,
    gaussian_blur,
)

DEFAULT_CANNY_LOW = 50
DEFAULT_CANNY_HIGH = 150
DEFAULT_CANNY_SIGMA = 1.4
DEFAULT_RDP_EPSILON = 2.0
DEFAULT_HULL_THRESHOLD = 50

SENTINEL_CENTROID = (0.5, 0.5)


@dataclass(frozen=True, eq=False)
class Contour:
    """Ordered (x, y) points; traced contours are chains of 8-connected pixels."""

    points: np.ndarray  # (n, 2) float64

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[1] != 2 or len(self.points) < 2:
            raise ContractViolation(
                f"contour needs an (n, 2) array with n >= 2, got shape {self.points.shape}"
            )


@dataclass(frozen=True)
class EdgeDescriptor:
    """Mean of all simplified edge points, normalized to [0, 1] by box size."""

    centroid: tuple[float, float]


@dataclass(frozen=True)
class HullDescriptor:
    """Mean of all hull vertices, normalized to [0, 1] by box size."""

    centroid: tuple[float, float]


@dataclass(frozen=True)
class MomentDescriptor:
    """Hu's seven moment invariants (raw values, no log transform)."""

    hu: tuple[float, float, float, float, float, float, float]


@dataclass(frozen=True)
class Moments:
    """Raw, central and normalized central moments up to order 3."""

    raw: dict
    centroid: tuple[float, float]
    mu: dict
    eta: dict


def canny_edges(
    img: ImageBuffer,
    low: int,
    high: int,
    sigma: Optional[float] = DEFAULT_CANNY_SIGMA,
) -> ImageBuffer:
    """Canny edge map: Sobel gradients, non-maximum suppression, hysteresis.

    ``sigma`` controls the built-in Gaussian pre-smoothing; pass None when
    the caller smoothed already. Thresholds apply to the raw gradient
    magnitude. Edge pixels are 255.
    """
    _require(img, ColorSpace.GRAY8, "canny_edges")
    if not (0 <= low < high <= 255):
        raise ContractViolation(f"need 0 <= low < high <= 255, got low={low} high={high}")
    smoothed = gaussian_blur(img, sigma) if sigma is not None else img
    gx, gy = kernels.sobel(smoothed.data.astype(np.float64))
    mag = np.sqrt(gx * gx + gy * gy)
    thinned = kernels.nonmax_suppress(mag, gx, gy)
    edges = kernels.hysteresis(thinned, float(low), float(high))
    return ImageBuffer.from_array(edges, ColorSpace.BINARY)


def _compress_chain(chain: np.ndarray) -> np.ndarray:
    """Collapse straight horizontal/vertical/diagonal runs to their endpoints."""
    n = len(chain)
    if n <= 2:
        return chain
    d_in = np.sign(chain - np.roll(chain, 1, axis=0))
    d_out = np.sign(np.roll(chain, -1, axis=0) - chain)
    keep = (d_in != d_out).any(axis=1)
    if keep.sum() < 2:  # cannot happen for a genuine border cycle; keep the chain usable
        keep[0] = True
        keep[n // 2] = True
    return chain[keep]


def trace_contours(binary: ImageBuffer) -> tuple[list[Contour], list[Optional[int]]]:
    """Border-following contour extraction with hole/outer hierarchy.

    Returns (contours, parents): ``parents[i]`` is the index of the contour
    enclosing contour ``i``, or None at top level. Straight runs are
    compressed to their endpoints; isolated single-pixel borders are
    discarded.
    """
    _require(binary, ColorSpace.BINARY, "trace_contours")
    chains, parent_idx = kernels.trace_borders(binary.data)
    contours = []
    parents: list[Optional[int]] = []
    kept = {}
    for i, chain in enumerate(chains):
        compressed = _compress_chain(np.asarray(chain))
        if len(compressed) < 2:
            continue
        xy = compressed[:, ::-1].astype(np.float64)  # (row, col) -> (x, y)
        kept[i] = len(contours)
        contours.append(Contour(points=xy))
        p = parent_idx[i]
        while p != -1 and p not in kept:
            p = parent_idx[p]
        parents.append(kept[p] if p != -1 else None)
    return contours, parents


def _point_segment_dist(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point to the segment [a, b]."""
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.sqrt(((points - a) ** 2).sum(axis=1))
    t = np.clip((points - a) @ ab / denom, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.sqrt(((points - closest) ** 2).sum(axis=1))


def rdp_simplify(contour: Contour, epsilon: float) -> Contour:
    """Ramer-Douglas-Peucker simplification by recursive farthest-point split.

    Endpoints are always retained. Every removed point lies within
    ``epsilon`` of the simplified polyline (distances are measured to the
    segment, not the infinite line, so the bound is strict).
    """
    if epsilon < 0:
        raise ContractViolation(f"epsilon must be >= 0, got {epsilon}")
    pts = contour.points
    n = len(pts)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[n - 1] = True
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        d = _point_segment_dist(pts[i + 1 : j], pts[i], pts[j])
        t = int(np.argmax(d))
        if d[t] > epsilon:
            k = i + 1 + t
            keep[k] = True
            stack.append((i, k))
            stack.append((k, j))
    return Contour(points=pts[keep].copy())


def edge_centroid(
    contours: Sequence[Contour], box: BoundingBox, normalized: bool = True
) -> EdgeDescriptor:
    """Unweighted mean of all points across all contours, scaled by box size.

    An empty contour list yields the box-center sentinel so downstream
    feature vectors keep a fixed width.
    """
    if not contours:
        cx, cy = SENTINEL_CENTROID
        if not normalized:
            cx, cy = cx * box.width, cy * box.height
        return EdgeDescriptor(centroid=(cx, cy))
    pts = np.vstack([c.points for c in contours])
    mean_x = float(pts[:, 0].mean())
    mean_y = float(pts[:, 1].mean())
    if normalized:
        return EdgeDescriptor(centroid=(mean_x / box.width, mean_y / box.height))
    return EdgeDescriptor(centroid=(mean_x, mean_y))


def convex_hull(points) -> Contour:
    """Gift-wrapping (Jarvis march) convex hull.

    Vertices come back counter-clockwise starting from the lowest-then-
    leftmost point; collinear boundary points are excluded. Fewer than three
    distinct points, or an all-collinear set, raise DegenerateHull.
    """
    pts = np.unique(np.asarray(points, dtype=np.float64).reshape(-1, 2), axis=0)
    n = len(pts)
    if n < 3:
        raise DegenerateHull(f"need >= 3 distinct points, got {n}")
    rel = pts - pts[0]
    cross0 = rel[:, 0] * rel[1, 1] - rel[:, 1] * rel[1, 0]
    if np.all(cross0 == 0.0):
        raise DegenerateHull("all points are collinear")

    start = int(np.lexsort((pts[:, 0], pts[:, 1]))[0])  # lowest y, then lowest x
    hull = []
    cur = start
    for _ in range(n + 1):
        hull.append(cur)
        cand = 0 if cur != 0 else 1
        cv = pts[cand] - pts[cur]
        for p in range(n):
            if p == cur:
                continue
            pv = pts[p] - pts[cur]
            o = cv[0] * pv[1] - cv[1] * pv[0]
            if o < 0.0 or (o == 0.0 and pv @ pv > cv @ cv):
                cand = p
                cv = pv
        cur = cand
        if cur == start:
            return Contour(points=pts[np.array(hull)])
    raise DegenerateHull("hull march failed to close (degenerate input)")


def hull_centroid(
    img: ImageBuffer,
    box: BoundingBox,
    threshold: int = DEFAULT_HULL_THRESHOLD,
    normalized: bool = True,
) -> HullDescriptor:
    """Mean of hull vertices over all contours of the thresholded crop.

    Pixels at or below ``threshold`` are suppressed before tracing; each
    traced contour contributes its gift-wrapped hull vertices. With no
    usable hull the box-center sentinel is returned.
    """
    _require(img, ColorSpace.GRAY8, "hull_centroid")
    patch = crop(img, box)
    contours, _ = trace_contours(binarize(patch, threshold))
    vertices = []
    for contour in contours:
        try:
            vertices.append(convex_hull(contour.points).points)
        except DegenerateHull:
            continue
    if not vertices:
        cx, cy = SENTINEL_CENTROID
        if not normalized:
            cx, cy = cx * box.width, cy * box.height
        return HullDescriptor(centroid=(cx, cy))
    pts = np.vstack(vertices)
    mean_x = float(pts[:, 0].mean())
    mean_y = float(pts[:, 1].mean())
    if normalized:
        return HullDescriptor(centroid=(mean_x / box.width, mean_y / box.height))
    return HullDescriptor(centroid=(mean_x, mean_y))


_ORDERS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


def central_moments(img: ImageBuffer, box: BoundingBox) -> Moments:
    """Raw, central and normalized central moments of the crop, up to order 3.

    m_pq sums x^p y^q I(x, y) over box-local coordinates; central moments
    are taken about the intensity centroid; eta_pq divides by
    m00^(1 + (p + q) / 2). A zero-intensity crop raises ZeroMass.
    """
    _require(img, ColorSpace.GRAY8, "central_moments")
    patch = crop(img, box).data.astype(np.float64)
    raw_sums = kernels.moment_sums(patch, 0.0, 0.0)
    m00 = raw_sums[0]
    if m00 == 0.0:
        raise ZeroMass(f"crop under {box} has zero total intensity")
    cx = raw_sums[1] / m00
    cy = raw_sums[2] / m00
    central_sums = kernels.moment_sums(patch, cx, cy)
    raw = {pq: float(raw_sums[i]) for i, pq in enumerate(_ORDERS)}
    mu = {pq: float(central_sums[i]) for i, pq in enumerate(_ORDERS)}
    eta = {
        (p, q): mu[(p, q)] / m00 ** (1.0 + (p + q) / 2.0)
        for (p, q) in _ORDERS
        if p + q >= 2
    }
    return Moments(raw=raw, centroid=(float(cx), float(cy)), mu=mu, eta=eta)


def hu_moments(img: ImageBuffer, box: BoundingBox) -> MomentDescriptor:
    """Hu's seven rotation/translation/scale invariants of the crop."""
    eta = central_moments(img, box).eta
    n20, n02, n11 = eta[(2, 0)], eta[(0, 2)], eta[(1, 1)]
    n30, n21, n12, n03 = eta[(3, 0)], eta[(2, 1)], eta[(1, 2)], eta[(0, 3)]
    a = n30 + n12
    b = n21 + n03
    c = n30 - 3.0 * n12
    d = 3.0 * n21 - n03
    h1 = n20 + n02
    h2 = (n20 - n02) ** 2 + 4.0 * n11**2
    h3 = c**2 + d**2
    h4 = a**2 + b**2
    h5 = c * a * (a**2 - 3.0 * b**2) + d * b * (3.0 * a**2 - b**2)
    h6 = (n20 - n02) * (a**2 - b**2) + 4.0 * n11 * a * b
    h7 = d * a * (a**2 - 3.0 * b**2) - c * b * (3.0 * a**2 - b**2)
    return MomentDescriptor(hu=(h1, h2, h3, h4, h5, h6, h7))
