"""Lloyd's K-Means over session feature vectors and identity labeling.

Fitting is deterministic for a given seed: centers start as k distinct
vectors sampled without replacement (Forgy), assignment uses the Euclidean
norm with ties broken toward the lowest cluster index, and iteration stops
once the largest centroid displacement falls below the tolerance and the
assignment is a fixed point (the extra stability requirement keeps the
published centroids exactly equal to their members' means).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation, InsufficientData, InsufficientNames

FEATURE_DIM = 18

# order of the feature vector components
FEATURE_NAMES = (
    "mu1",
    "mu2",
    "mu3",
    "mu4",
    "amp_r",
    "amp_g",
    "amp_b",
    "edge_x",
    "edge_y",
    "hull_x",
    "hull_y",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "h7",
)

DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 300


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """One detection's 18-dim descriptor plus its position in the session."""

    dims: np.ndarray  # (18,) float64
    frame_index: int
    detection_index: int

    def __post_init__(self):
        arr = np.asarray(self.dims, dtype=np.float64)
        if arr.shape != (FEATURE_DIM,):
            raise ContractViolation(f"feature vector must have {FEATURE_DIM} dims, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ContractViolation(
                f"feature vector at frame {self.frame_index} det {self.detection_index} "
                "has non-finite components"
            )
        object.__setattr__(self, "dims", arr)


@dataclass(frozen=True, eq=False)
class ClusterModel:
    k: int
    centroids: np.ndarray  # (k, 18)
    assignments: np.ndarray  # (n,) int
    inertia: float
    iterations: int
    seed: int
    inertia_history: tuple = field(default=())


@dataclass(frozen=True)
class IdentityMap:
    """cluster index -> human-readable identity, bijective over nonempty clusters."""

    names: dict

    def name_of(self, cluster: int) -> str:
        return self.names[cluster]


def _matrix(vectors: Sequence[FeatureVector]) -> np.ndarray:
    return np.vstack([v.dims for v in vectors])


def _nearest(x: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row argmin of squared Euclidean distance (ties -> lowest index)."""
    d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    return labels, d2


def kmeans_fit(
    vectors: Sequence[FeatureVector],
    k: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ClusterModel:
    """Fit K-Means by Lloyd's algorithm.

    Empty clusters are repaired by reseeding the centroid onto the vector
    currently farthest from its own centroid. ``inertia_history`` records the
    post-update inertia once per iteration; it is non-increasing.
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if not vectors:
        raise InsufficientData("no feature vectors to cluster")
    if k > len(vectors):
        raise InsufficientData(f"k={k} exceeds the {len(vectors)} available vectors")

    x = _matrix(vectors)
    n = len(x)
    rng = np.random.default_rng(seed)
    centers = x[rng.choice(n, size=k, replace=False)].copy()

    labels, d2 = _nearest(x, centers)
    history = []
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        new_centers = centers.copy()
        for c in range(k):
            members = labels == c
            if members.any():
                new_centers[c] = x[members].mean(axis=0)
        # reseed empty clusters onto the farthest-from-centroid vectors
        empty = [c for c in range(k) if not (labels == c).any()]
        if empty:
            dist_to_own = d2[np.arange(n), labels].copy()
            for c in empty:
                far = int(dist_to_own.argmax())
                new_centers[c] = x[far]
                dist_to_own[far] = -1.0
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        new_labels, d2 = _nearest(x, centers)
        history.append(float(d2[np.arange(n), new_labels].sum()))
        stable = bool((new_labels == labels).all())
        labels = new_labels
        if shift < tol and stable:
            break

    inertia = float(d2[np.arange(n), labels].sum())
    return ClusterModel(
        k=k,
        centroids=centers,
        assignments=labels,
        inertia=inertia,
        iterations=iterations,
        seed=seed,
        inertia_history=tuple(history),
    )


def assign(model: ClusterModel, v: FeatureVector) -> int:
    """Index of the closest centroid (Euclidean; ties -> lowest index)."""
    d2 = ((model.centroids - v.dims) ** 2).sum(axis=1)
    return int(d2.argmin())


@dataclass(frozen=True)
class FeatureStats:
    """Per-dimension mean and population std frozen from a training set."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, v: FeatureVector) -> FeatureVector:
        scale = np.where(self.std > 0.0, self.std, 1.0)
        return FeatureVector(
            dims=(v.dims - np.where(self.std > 0.0, self.mean, 0.0)) / scale,
            frame_index=v.frame_index,
            detection_index=v.detection_index,
        )


def normalize_features(
    vectors: Sequence[FeatureVector],
) -> tuple[list[FeatureVector], FeatureStats]:
    """Z-score each dimension; zero-variance dimensions pass through unchanged."""
    if len(vectors) < 2:
        raise InsufficientData("normalization needs at least 2 vectors")
    x = _matrix(vectors)
    stats = FeatureStats(mean=x.mean(axis=0), std=x.std(axis=0))
    return [stats.apply(v) for v in vectors], stats


def label_clusters(
    model: ClusterModel,
    vectors: Sequence[FeatureVector],
    names: Optional[Sequence[str]] = None,
) -> IdentityMap:
    """Name nonempty clusters in order of their earliest member.

    Order is by (frame_index, detection_index) of each cluster's first
    appearance, so labels are stable under input reordering. Without a name
    list, labels are generated as diver-0, diver-1, ...
    """
    if len(vectors) != len(model.assignments):
        raise ContractViolation("model was not fitted over these vectors")
    first_seen = {}
    for v, c in zip(vectors, model.assignments):
        key = (v.frame_index, v.detection_index)
        c = int(c)
        if c not in first_seen or key < first_seen[c]:
            first_seen[c] = key
    ordered = sorted(first_seen, key=first_seen.get)
    if names is not None and len(names) < len(ordered):
        raise InsufficientNames(
            f"{len(ordered)} nonempty clusters but only {len(names)} names"
        )
    mapping = {}
    for rank, cluster in enumerate(ordered):
        mapping[cluster] = names[rank] if names is not None else f"diver-{rank}"
    return IdentityMap(names=mapping)
