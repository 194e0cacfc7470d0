"""Scoring identity assignments against ground truth.

Each ground-truth instance is matched to the predicted detection with the
highest IoU at or above the threshold (greedy, one-to-one per frame).
Because cluster labels are arbitrary, predicted names are aligned to truth
names once per session by the injective mapping that maximizes agreement
over the confusion counts. Percentages are per ground-truth instance:
correct + wrong + missed = 100.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import ContractViolation, FrameMismatch
from ..imaging import BoundingBox
from .detections import DetectionsDoc

IOU_THRESHOLD = 0.5
_MAX_ALIGN = 8


@dataclass(frozen=True)
class SessionReport:
    scenario: str
    accuracy_pct: float
    missed_pct: float
    wrong_pct: float
    truth_instances: int
    matched: int
    correct: int
    wrong: int
    missed: int
    unmatched_predictions: int
    name_alignment: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "accuracy_pct": self.accuracy_pct,
            "missed_pct": self.missed_pct,
            "wrong_pct": self.wrong_pct,
            "truth_instances": self.truth_instances,
            "matched": self.matched,
            "correct": self.correct,
            "wrong": self.wrong,
            "missed": self.missed,
            "unmatched_predictions": self.unmatched_predictions,
            "name_alignment": dict(self.name_alignment),
        }


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes."""
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.width * a.height + b.width * b.height - inter
    return inter / union


def _match_frame(truth_dets, pred_dets, threshold):
    """Greedy one-to-one IoU matching; returns list of (truth_i, pred_i)."""
    pairs = []
    for ti, t in enumerate(truth_dets):
        for pi, p in enumerate(pred_dets):
            v = iou(t.box, p.box)
            if v >= threshold:
                pairs.append((-v, ti, pi))
    pairs.sort()
    used_t, used_p = set(), set()
    matches = []
    for _, ti, pi in pairs:
        if ti in used_t or pi in used_p:
            continue
        used_t.add(ti)
        used_p.add(pi)
        matches.append((ti, pi))
    return matches


def _best_alignment(confusion, pred_names, truth_names):
    """Injective name mapping maximizing the summed confusion counts."""
    if len(pred_names) > _MAX_ALIGN and len(truth_names) > _MAX_ALIGN:
        raise ContractViolation(
            f"alignment search over {len(pred_names)}x{len(truth_names)} names is too large"
        )
    swap = len(pred_names) > len(truth_names)
    small, large = (truth_names, pred_names) if swap else (pred_names, truth_names)
    best_score = -1
    best = {}
    for perm in itertools.permutations(large, len(small)):
        score = 0
        for s, l in zip(small, perm):
            p, t = (l, s) if swap else (s, l)
            score += confusion.get((p, t), 0)
        if score > best_score:
            best_score = score
            best = {(l if swap else s): (s if swap else l) for s, l in zip(small, perm)}
    return best


def evaluate(
    predicted: DetectionsDoc, truth: DetectionsDoc, iou_threshold: float = IOU_THRESHOLD
) -> SessionReport:
    """Score predicted identity assignments against labeled ground truth."""
    if set(predicted.frames) != set(truth.frames):
        only_p = sorted(set(predicted.frames) - set(truth.frames))[:5]
        only_t = sorted(set(truth.frames) - set(predicted.frames))[:5]
        raise FrameMismatch(
            f"frame sets differ (predicted-only {only_p}, truth-only {only_t})"
        )

    matched_pairs = []  # (pred_identity, truth_identity)
    total_truth = 0
    total_pred = 0
    for index in sorted(truth.frames):
        truth_dets = [d for d in truth.frames[index] if d.identity is not None]
        pred_dets = [d for d in predicted.frames[index] if d.identity is not None]
        total_truth += len(truth_dets)
        total_pred += len(pred_dets)
        for ti, pi in _match_frame(truth_dets, pred_dets, iou_threshold):
            matched_pairs.append((pred_dets[pi].identity, truth_dets[ti].identity))

    if total_truth == 0:
        raise ContractViolation("ground truth contains no labeled instances")

    confusion = {}
    for p, t in matched_pairs:
        confusion[(p, t)] = confusion.get((p, t), 0) + 1
    pred_names = sorted({p for p, _ in matched_pairs})
    truth_names = sorted({t for _, t in matched_pairs})
    alignment = _best_alignment(confusion, pred_names, truth_names) if matched_pairs else {}

    correct = sum(1 for p, t in matched_pairs if alignment.get(p) == t)
    matched = len(matched_pairs)
    wrong = matched - correct
    missed = total_truth - matched
    return SessionReport(
        scenario=truth.video,
        accuracy_pct=100.0 * correct / total_truth,
        missed_pct=100.0 * missed / total_truth,
        wrong_pct=100.0 * wrong / total_truth,
        truth_instances=total_truth,
        matched=matched,
        correct=correct,
        wrong=wrong,
        missed=missed,
        unmatched_predictions=total_pred - matched,
        name_alignment=alignment,
    )


def format_report_table(reports) -> str:
    """The three-column text table, one row per scenario."""
    header = ("Scenario", "Accuracy(%)", "Missed Identification(%)", "Wrong Identification(%)")
    rows = [
        (
            r.scenario,
            f"{r.accuracy_pct:.1f}",
            f"{r.missed_pct:.1f}",
            f"{r.wrong_pct:.1f}",
        )
        for r in reports
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)),
        "  ".join("-" * widths[i] for i in range(4)),
    ]
    for row in rows:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(4)))
    return "\n".join(lines)
