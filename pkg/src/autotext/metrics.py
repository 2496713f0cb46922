"""Classification quality measures built on per-class confusion counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

METRICS = ("accuracy", "macro_f1", "micro_f1", "precision", "recall")


@dataclass(frozen=True)
class ConfusionCounts:
    classes: tuple[str, ...]
    tp: tuple[int, ...]
    fp: tuple[int, ...]
    fn: tuple[int, ...]
    total: int
    gold_classes: frozenset

    def of(self, label: str) -> tuple[int, int, int]:
        i = self.classes.index(label)
        return self.tp[i], self.fp[i], self.fn[i]


def confusion(true_labels: Sequence, pred_labels: Sequence) -> ConfusionCounts:
    if len(true_labels) != len(pred_labels):
        raise ValueError("label lists differ in length")
    if not true_labels:
        raise ValueError("label lists are empty")
    classes = tuple(sorted(set(true_labels) | set(pred_labels), key=str))
    pos = {c: i for i, c in enumerate(classes)}
    tp = [0] * len(classes)
    fp = [0] * len(classes)
    fn = [0] * len(classes)
    for t, p in zip(true_labels, pred_labels):
        if t == p:
            tp[pos[t]] += 1
        else:
            fp[pos[p]] += 1
            fn[pos[t]] += 1
    return ConfusionCounts(
        classes, tuple(tp), tuple(fp), tuple(fn), len(true_labels), frozenset(true_labels)
    )


def _ratio(a: int, b: int) -> float:
    return a / b if b else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def evaluate(kind: str, counts: ConfusionCounts) -> float:
    """Metric value in [0, 1].

    Macro averages run over the classes present in the gold labels; any 0/0
    component counts as 0.
    """
    if kind == "accuracy":
        return sum(counts.tp) / counts.total
    if kind == "micro_f1":
        tp, fp, fn = sum(counts.tp), sum(counts.fp), sum(counts.fn)
        return _f1(_ratio(tp, tp + fp), _ratio(tp, tp + fn))
    if kind not in ("macro_f1", "precision", "recall"):
        raise ValueError(f"unknown metric: {kind!r}")
    values = []
    for c, tp, fp, fn in zip(counts.classes, counts.tp, counts.fp, counts.fn):
        if c not in counts.gold_classes:
            continue
        p, r = _ratio(tp, tp + fp), _ratio(tp, tp + fn)
        values.append({"macro_f1": _f1(p, r), "precision": p, "recall": r}[kind])
    return sum(values) / len(values)


def score_labels(kind: str, true_labels: Sequence, pred_labels: Sequence) -> float:
    return evaluate(kind, confusion(true_labels, pred_labels))
