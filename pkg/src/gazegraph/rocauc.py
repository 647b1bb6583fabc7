"""ROC curves and AUC for centrality scores judged against importance labels.

The sweep visits distinct score values descending, predicting positive at
score >= threshold. AUC is accumulated from integer true/false-positive
counts, so the trapezoidal value equals the Mann-Whitney pairwise statistic
(ties worth half) exactly, not just approximately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import GazeGraphError


class UndefinedAucError(GazeGraphError):
    """Raised when labels are single-class; names the class that is missing."""

    def __init__(self, missing_class: str):
        super().__init__(f"AUC undefined: no {missing_class} labels in input")
        self.missing_class = missing_class


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    fpr: float
    tpr: float


@dataclass(frozen=True)
class RocCurve:
    points: tuple[RocPoint, ...]
    auc: float


def roc_curve(pairs: Iterable[tuple[int, float]]) -> RocCurve:
    """Sweep a (label, score) pool into an ROC curve with exact AUC.

    Starts at (0, 0) with an infinite threshold and always reaches (1, 1).
    Labels must be 0/1 with both classes present.
    """
    data = list(pairs)
    for label, _ in data:
        if label not in (0, 1):
            raise GazeGraphError(f"labels must be 0 or 1, got {label!r}")
    positives = sum(label for label, _ in data)
    negatives = len(data) - positives
    if positives == 0:
        raise UndefinedAucError("positive")
    if negatives == 0:
        raise UndefinedAucError("negative")

    by_score: dict[float, list[int]] = {}
    for label, score in data:
        counts = by_score.setdefault(float(score), [0, 0])
        counts[label] += 1

    points = [RocPoint(float("inf"), 0.0, 0.0)]
    tp = fp = 0
    area2 = 0
    for score in sorted(by_score, reverse=True):
        neg, pos = by_score[score]
        area2 += neg * (tp + (tp + pos))
        tp += pos
        fp += neg
        point = RocPoint(score, fp / negatives, tp / positives)
        if (point.fpr, point.tpr) != (points[-1].fpr, points[-1].tpr):
            points.append(point)
    return RocCurve(tuple(points), area2 / (2 * positives * negatives))


def auc(pairs: Iterable[tuple[int, float]]) -> float:
    return roc_curve(pairs).auc
