"""Diver identity assignment for tracking-by-detection video sessions.

Per-frame bounding boxes come in, an 18-dim spatial/frequency descriptor is
extracted per detection, K-Means groups the descriptors into per-diver
clusters, and stable identity labels go back out, surviving scene exit and
re-entry.
"""

from .clustering import (
    FEATURE_DIM,
    FEATURE_NAMES,
    ClusterModel,
    FeatureStats,
    FeatureVector,
    IdentityMap,
    assign,
    kmeans_fit,
    label_clusters,
    normalize_features,
)
from .config import Config, build_config, defaults
from .imaging import (
    BoundingBox,
    ColorSpace,
    ImageBuffer,
    binarize,
    crop,
    full_box,
    gaussian_blur,
    lab_to_rgb,
    rgb_to_lab,
    to_grayscale,
)
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
