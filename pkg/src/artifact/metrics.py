"""Confusion-matrix metrics: weighted F1, accuracy, per-class sensitivity."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np

from .labels import N_CLASSES, ArtifactClass

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("weighted_f1", "accuracy") + tuple(f"S_{c.name}" for c in ArtifactClass)
COLUMN_TITLES = ("Weighted-F1", "Accuracy") + tuple(f"S_{c.name}" for c in ArtifactClass)


def confusion(truth, pred, n_classes: int = N_CLASSES) -> np.ndarray:
    """Counts with rows = true class, columns = predicted class."""
    truth = np.asarray(truth, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    if truth.shape != pred.shape:
        raise ValueError(f"length mismatch: {len(truth)} truths vs {len(pred)} predictions")
    if truth.size == 0:
        raise ValueError("empty label sequence")
    return np.bincount(truth * n_classes + pred, minlength=n_classes * n_classes).reshape(n_classes, n_classes)


@dataclass
class EvalReport:
    weighted_f1: float
    accuracy: float
    sensitivity: dict[ArtifactClass, float]
    support: dict[ArtifactClass, int]
    f1: dict[ArtifactClass, float]

    def row(self) -> dict[str, float | None]:
        out = {"weighted_f1": self.weighted_f1, "accuracy": self.accuracy}
        for c in ArtifactClass:
            out[f"S_{c.name}"] = self.sensitivity.get(c)
        return out

    def to_dict(self) -> dict:
        return {
            **self.row(),
            "support": {c.name: n for c, n in self.support.items()},
            "f1": {c.name: v for c, v in self.f1.items()},
        }


def evaluate(cm, exclude_null: bool = False) -> EvalReport:
    """Metrics of a confusion matrix.

    A class with no predictions (or no support) gets F1 = 0. Classes absent
    from the truth weigh nothing and have no sensitivity entry. With
    ``exclude_null`` the F1 weighting runs over artifact classes only.
    """
    cm = np.asarray(cm, dtype=np.int64)
    total = int(cm.sum())
    if total == 0:
        raise ValueError("all-zero confusion matrix")
    tp = np.diag(cm).astype(np.float64)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    f1 = np.zeros(len(cm))
    for c in range(len(cm)):
        if support[c] == 0 and predicted[c] == 0:
            continue
        precision = tp[c] / predicted[c] if predicted[c] else 0.0
        recall = tp[c] / support[c] if support[c] else 0.0
        if precision + recall == 0:
            if support[c]:
                logger.debug("F1 undefined for class %s; set to 0", ArtifactClass(c).name)
            continue
        f1[c] = 2 * precision * recall / (precision + recall)
    weight = support.astype(np.float64)
    if exclude_null:
        weight[ArtifactClass.null] = 0.0
    denom = weight.sum()
    weighted = float((weight * f1).sum() / denom) if denom else 0.0
    present = [ArtifactClass(c) for c in range(len(cm)) if support[c]]
    return EvalReport(
        weighted_f1=weighted,
        accuracy=float(tp.sum() / total),
        sensitivity={c: float(tp[c] / support[c]) for c in present},
        support={c: int(support[c]) for c in present},
        f1={c: float(f1[c]) for c in present},
    )


def score(truth, pred, exclude_null: bool = False) -> EvalReport:
    return evaluate(confusion(truth, pred), exclude_null)


def _cell(column: str, value) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "n/a"
    if column == "weighted_f1":
        return f"{value:.4f}"
    return f"{100 * value:.2f}%"


def render_table(rows: dict[str, dict], columns=METRIC_COLUMNS) -> str:
    """Fixed-width table; ``rows`` maps algorithm name to {column: value}."""
    names = list(rows)
    width = max([len("Algorithm")] + [len(n) for n in names]) + 2
    titles = dict(zip(METRIC_COLUMNS, COLUMN_TITLES))
    lines = ["Algorithm".ljust(width) + "".join(f"{titles[c]:>13}" for c in columns)]
    for name in names:
        lines.append(name.ljust(width) + "".join(f"{_cell(c, rows[name].get(c)):>13}" for c in columns))
    return "\n".join(lines)


def report_json(report: EvalReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True)
