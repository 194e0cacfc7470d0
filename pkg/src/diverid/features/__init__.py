from .color import ColorDescriptor, quadrant_color_means
from .frequency import SpectrumDescriptor, average_amplitude, dft2d, resize_nearest
from .shape import (
    Contour,
    EdgeDescriptor,
    HullDescriptor,
    MomentDescriptor,
    Moments,
    canny_edges,
    central_moments,
    convex_hull,
    edge_centroid,
    hu_moments,
    hull_centroid,
    rdp_simplify,
    trace_contours,
)

__all__ = [
    "ColorDescriptor",
    "quadrant_color_means",
    "SpectrumDescriptor",
    "average_amplitude",
    "dft2d",
    "resize_nearest",
    "Contour",
    "EdgeDescriptor",
    "HullDescriptor",
    "MomentDescriptor",
    "Moments",
    "canny_edges",
    "central_moments",
    "convex_hull",
    "edge_centroid",
    "hu_moments",
    "hull_centroid",
    "rdp_simplify",
    "trace_contours",
]
