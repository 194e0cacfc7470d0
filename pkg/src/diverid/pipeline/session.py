"""Session orchestration: detections in, per-frame identities out.

Batch mode collects every usable feature vector, fits K-Means once with k
equal to the configured count (or the maximum simultaneous detections) and
labels clusters by first appearance. Online mode fits on a warm-up prefix,
assigns later vectors to the nearest centroid and refits whenever a frame
shows more simultaneous detections than the current k.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..clustering import (
    FeatureVector,
    IdentityMap,
    assign,
    kmeans_fit,
    normalize_features,
)
from ..config import Config, defaults
from ..errors import (
    ContractViolation,
    DegenerateRegion,
    EmptySession,
    InsufficientNames,
    ZeroMass,
)
from ..features.color import quadrant_color_means
from ..features.frequency import average_amplitude
from ..features.shape import (
    canny_edges,
    edge_centroid,
    hu_moments,
    hull_centroid,
    rdp_simplify,
    trace_contours,
)
from ..imaging import ImageBuffer, crop, full_box, rgb_to_lab, to_grayscale
from .detections import Detection, DetectionsDoc

DIVER_CLASS = "diver"


@dataclass(frozen=True)
class SessionEvent:
    level: str
    message: str
    frame_index: Optional[int] = None
    detection_index: Optional[int] = None


@dataclass
class SessionResult:
    assignments: DetectionsDoc
    model: object
    identity_map: IdentityMap
    vectors: list
    log: list = field(default_factory=list)


def build_feature_vector(frame: ImageBuffer, det: Detection, config: Config = None) -> FeatureVector:
    """The fixed 18-dim descriptor of one detection.

    Order: quadrant color means, per-channel spectral amplitudes, edge
    centroid, hull centroid, Hu moments. Degenerate crops raise
    DegenerateRegion or ZeroMass; callers treat those as soft failures.
    """
    if config is None:
        config = defaults()
    patch = crop(frame, det.box)
    box = full_box(patch)
    normalized = not config["shape.raw_centroids"]

    color = quadrant_color_means(rgb_to_lab(patch), box)
    spectrum = average_amplitude(
        frame, det.box, size=config["spectrum.size"], include_dc=config["spectrum.include_dc"]
    )
    gray = to_grayscale(patch)
    edges = canny_edges(gray, config["canny.low"], config["canny.high"], config["canny.sigma"])
    contours, _ = trace_contours(edges)
    simplified = [rdp_simplify(c, config["rdp.epsilon"]) for c in contours]
    edge = edge_centroid(simplified, box, normalized=normalized)
    hull = hull_centroid(gray, box, threshold=config["hull.threshold"], normalized=normalized)
    hu = hu_moments(gray, box)

    dims = np.array(
        list(color.mu) + list(spectrum.amp) + list(edge.centroid) + list(hull.centroid) + list(hu.hu),
        dtype=np.float64,
    )
    return FeatureVector(dims=dims, frame_index=det.frame_index, detection_index=0)


def _unique_assignments(dists: np.ndarray) -> list:
    """Resolve duplicate cluster claims within one frame.

    Every detection proposes its nearest centroid; on a clash the closer
    detection keeps it and the loser moves to its next-nearest unclaimed
    centroid. Ties break toward the lower detection index. Detections left
    with no centroid return None.
    """
    n, k = dists.shape
    prefs = [np.lexsort((np.arange(k), dists[d])) for d in range(n)]
    ptr = [0] * n
    owner = {}
    result = [None] * n
    queue = deque(range(n))
    while queue:
        d = queue.popleft()
        while ptr[d] < k:
            c = int(prefs[d][ptr[d]])
            if c not in owner:
                owner[c] = d
                result[d] = c
                break
            o = owner[c]
            if dists[d, c] < dists[o, c] or (dists[d, c] == dists[o, c] and d < o):
                owner[c] = d
                result[d] = c
                result[o] = None
                ptr[o] += 1
                queue.append(o)
                break
            ptr[d] += 1
    return result


def _order_clusters(labels, vectors) -> list:
    """Cluster indices sorted by their earliest (frame, detection) member."""
    first_seen = {}
    for v, c in zip(vectors, labels):
        key = (v.frame_index, v.detection_index)
        c = int(c)
        if c not in first_seen or key < first_seen[c]:
            first_seen[c] = key
    return sorted(first_seen, key=first_seen.get)


@dataclass
class _Extracted:
    det: Detection
    detection_index: int
    vector: Optional[FeatureVector]


def _extract_frame(frame, dets, config, threads, log):
    def one(pair):
        di, det = pair
        try:
            v = build_feature_vector(frame, det, config)
            return _Extracted(det, di, FeatureVector(v.dims, det.frame_index, di))
        except (ZeroMass, DegenerateRegion) as exc:
            log.append(
                SessionEvent(
                    level="warning",
                    message=f"skipping detection: {exc}",
                    frame_index=det.frame_index,
                    detection_index=di,
                )
            )
            return _Extracted(det, di, None)

    items = list(enumerate(dets))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, items))
    return [one(item) for item in items]


def run_session(
    frames,
    doc: DetectionsDoc,
    config: Config = None,
    names=None,
    threads: int = 1,
) -> SessionResult:
    """Extract, cluster and label every diver detection of a session.

    ``frames`` is any object with ``indices()`` and ``load(index)``.
    Within one frame no two detections ever share an identity; surplus
    detections (more than k in a frame) are dropped with a log entry.
    """
    if config is None:
        config = defaults()
    log: list[SessionEvent] = []

    available = set(frames.indices())
    missing = sorted(set(doc.frames) - available)
    if missing:
        raise ContractViolation(f"detections reference missing frames: {missing[:10]}")

    per_frame: dict[int, list] = {}
    for index in sorted(doc.frames):
        eligible = []
        for di, det in enumerate(doc.frames[index]):
            if det.class_label != DIVER_CLASS:
                log.append(SessionEvent("info", f"ignoring class {det.class_label!r}", index, di))
                continue
            if det.score < config["session.min_score"]:
                log.append(SessionEvent("info", f"score {det.score} below threshold", index, di))
                continue
            eligible.append(det)
        frame = frames.load(index)
        if frame.width != doc.frame_width or frame.height != doc.frame_height:
            raise ContractViolation(
                f"frame {index} is {frame.width}x{frame.height}, "
                f"document declares {doc.frame_width}x{doc.frame_height}"
            )
        per_frame[index] = _extract_frame(frame, eligible, config, threads, log)

    vectors = [e.vector for idx in sorted(per_frame) for e in per_frame[idx] if e.vector is not None]
    if not vectors:
        raise EmptySession("no usable detections in the session")

    frame_counts = {
        index: sum(1 for e in entries if e.vector is not None)
        for index, entries in per_frame.items()
    }
    frames_with_vectors = [f for f in sorted(per_frame) if frame_counts[f] > 0]
    warmup_frames = set(frames_with_vectors[: config["session.warmup_frames"]])

    # feature scaling: batch mode fits stats on everything, online mode on
    # the warm-up prefix only (later vectors reuse the frozen stats)
    if config["kmeans.normalize"] and len(vectors) >= 2:
        if config["session.mode"] == "batch":
            cluster_vectors, _ = normalize_features(vectors)
        else:
            warmup_raw = [v for v in vectors if v.frame_index in warmup_frames]
            if len(warmup_raw) >= 2:
                _, stats = normalize_features(warmup_raw)
                cluster_vectors = [stats.apply(v) for v in vectors]
            else:
                cluster_vectors = list(vectors)
    else:
        cluster_vectors = list(vectors)

    seed = config["kmeans.seed"]
    tol = config["kmeans.tol"]
    max_iter = config["kmeans.max_iter"]
    configured_k = config["kmeans.k"]

    by_key = {(v.frame_index, v.detection_index): i for i, v in enumerate(cluster_vectors)}
    labels: list = [None] * len(cluster_vectors)

    if config["session.mode"] == "batch":
        k = max(frame_counts.values()) if configured_k == "auto" else configured_k
        model = kmeans_fit(cluster_vectors, k, seed, tol=tol, max_iter=max_iter)
        labels = [int(c) for c in model.assignments]
    else:
        warmup = [v for v in cluster_vectors if v.frame_index in warmup_frames]
        if configured_k == "auto":
            k = max(frame_counts[f] for f in warmup_frames)
        else:
            k = configured_k
        k = min(k, len(warmup))
        model = kmeans_fit(warmup, k, seed, tol=tol, max_iter=max_iter)
        for i, v in enumerate(warmup):
            labels[by_key[(v.frame_index, v.detection_index)]] = int(model.assignments[i])
        seen = list(warmup)
        for index in frames_with_vectors:
            if index in warmup_frames:
                continue
            frame_vecs = [v for v in cluster_vectors if v.frame_index == index]
            if configured_k == "auto" and frame_counts[index] > model.k:
                seen.extend(frame_vecs)
                model = kmeans_fit(
                    seen, min(frame_counts[index], len(seen)), seed, tol=tol, max_iter=max_iter
                )
                log.append(SessionEvent("info", f"refit with k={model.k} at frame {index}", index))
                for i, v in enumerate(seen):
                    labels[by_key[(v.frame_index, v.detection_index)]] = int(model.assignments[i])
                continue
            seen.extend(frame_vecs)
            for v in frame_vecs:
                labels[by_key[(v.frame_index, v.detection_index)]] = assign(model, v)

    ordered = _order_clusters(labels, cluster_vectors)
    if names is not None and len(names) < len(ordered):
        raise InsufficientNames(f"{len(ordered)} clusters but only {len(names)} names")
    identity_map = IdentityMap(
        names={c: (names[r] if names is not None else f"diver-{r}") for r, c in enumerate(ordered)}
    )

    named = sorted(identity_map.names)
    centroids = model.centroids[np.array(named)]
    out = DetectionsDoc(video=doc.video, frame_width=doc.frame_width, frame_height=doc.frame_height)
    for index in sorted(per_frame):
        entries = [e for e in per_frame[index] if e.vector is not None]
        dets_out = []
        if entries:
            dists = np.vstack(
                [
                    ((centroids - cluster_vectors[by_key[(index, e.detection_index)]].dims) ** 2).sum(axis=1)
                    for e in entries
                ]
            )
            resolved = _unique_assignments(dists)
            for e, pos in zip(entries, resolved):
                if pos is None:
                    log.append(
                        SessionEvent(
                            "warning",
                            "no free cluster for detection; dropped",
                            index,
                            e.detection_index,
                        )
                    )
                    continue
                det = e.det
                dets_out.append(
                    Detection(
                        frame_index=det.frame_index,
                        box=det.box,
                        score=det.score,
                        class_label=det.class_label,
                        identity=identity_map.name_of(named[pos]),
                    )
                )
        out.frames[index] = dets_out

    return SessionResult(
        assignments=out,
        model=model,
        identity_map=identity_map,
        vectors=vectors,
        log=log,
    )
