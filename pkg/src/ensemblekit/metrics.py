"""Confusion matrices and the per-class / averaged metrics derived from them.

Rows are true classes, columns predicted classes. Any 0/0 ratio is reported
as 0 rather than NaN.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    counts: np.ndarray
    classes: tuple

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise DataError(f"confusion matrix must be square, got shape {counts.shape}")
        if counts.shape[0] != len(self.classes):
            raise DataError("confusion matrix size does not match the class registry")
        if np.any(counts < 0):
            raise DataError("confusion matrix counts must be nonnegative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def K(self):
        return self.counts.shape[0]

    @property
    def total(self):
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class Averages:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ClassificationReport:
    per_class: tuple
    accuracy: float
    macro_avg: Averages
    weighted_avg: Averages
    total: int

    @property
    def support(self):
        return self.total


def confusion_matrix(y_true, y_pred, K, classes=None):
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise DataError(f"label lists differ in length: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise DataError("cannot build a confusion matrix from zero samples")
    for name, arr in (("true", y_true), ("predicted", y_pred)):
        if arr.min() < 0 or arr.max() >= K:
            raise DataError(f"{name} label index out of range [0, {K})")
    counts = np.zeros((K, K), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    if classes is None:
        classes = tuple(str(c) for c in range(K))
    return ConfusionMatrix(counts, classes)


def _ratio(num, den):
    return num / den if den else 0.0


def per_class_prf(cm, c):
    counts = cm.counts
    tp = int(counts[c, c])
    fp = int(counts[:, c].sum()) - tp
    fn = int(counts[c, :].sum()) - tp
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    return precision, recall, f1


def accuracy(cm):
    if cm.total < 1:
        raise DataError("accuracy of an empty confusion matrix is undefined")
    return int(np.trace(cm.counts)) / cm.total


def classification_report(cm):
    support = cm.counts.sum(axis=1)
    rows = []
    for c in range(cm.K):
        p, r, f = per_class_prf(cm, c)
        rows.append(ClassMetrics(cm.classes[c], p, r, f, int(support[c])))
    prf = np.array([[m.precision, m.recall, m.f1] for m in rows])
    macro = prf.mean(axis=0)
    weighted = (support @ prf) / support.sum() if support.sum() else np.zeros(3)
    return ClassificationReport(
        per_class=tuple(rows),
        accuracy=accuracy(cm),
        macro_avg=Averages(*(float(v) for v in macro)),
        weighted_avg=Averages(*(float(v) for v in weighted)),
        total=cm.total,
    )
