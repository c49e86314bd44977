from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ensemblekit.errors import DataError
from ensemblekit.metrics import (
    ConfusionMatrix,
    accuracy,
    classification_report,
    confusion_matrix,
    per_class_prf,
)

# reconstructed boosting matrix: 4 healthy -> black pod rot, 16 healthy -> pod borer
RECONSTRUCTED = [[298, 1, 1], [4, 280, 16], [0, 0, 300]]
CLASSES = ("black_pod_rot", "healthy", "pod_borer")
# exact values, from TP/(TP+FP), TP/(TP+FN), 2TP/(2TP+FP+FN)
EXPECTED_P = [Fraction(298, 302), Fraction(280, 281), Fraction(300, 317)]
EXPECTED_R = [Fraction(298, 300), Fraction(280, 300), Fraction(1)]
EXPECTED_F = [Fraction(596, 602), Fraction(560, 581), Fraction(600, 617)]


def test_confusion_matrix_hand_count():
    cm = confusion_matrix([0, 1, 2], [0, 2, 2], 3)
    assert cm.counts.tolist() == [[1, 0, 0], [0, 0, 1], [0, 0, 1]]


def test_confusion_matrix_diagonal():
    y = [0, 1, 1, 2, 2, 2]
    cm = confusion_matrix(y, y, 3)
    assert np.array_equal(cm.counts, np.diag([1, 2, 3]))
    assert accuracy(cm) == 1.0


@pytest.mark.parametrize("t, p, K", [([0, 1], [0], 2), ([0, 3], [0, 1], 3), ([], [], 2), ([0], [-1], 2)])
def test_confusion_matrix_errors(t, p, K):
    with pytest.raises(DataError):
        confusion_matrix(t, p, K)


def test_four_misclassifications_of_900():
    counts = np.diag([298, 299, 299])
    counts[1, 0] = 2
    counts[2, 0] = 1
    counts[2, 1] = 1
    counts[1, 1] -= 1
    counts[0, 0] += 1
    cm = ConfusionMatrix(counts, CLASSES)
    assert cm.total == 900 and int(np.trace(cm.counts)) == 896
    assert accuracy(cm) == pytest.approx(896 / 900, abs=1e-15)


def test_accuracy_uniform_2x2():
    assert accuracy(ConfusionMatrix([[1, 1], [1, 1]], ("a", "b"))) == 0.5
    with pytest.raises(DataError):
        accuracy(ConfusionMatrix([[0, 0], [0, 0]], ("a", "b")))


def test_prf_hand_case():
    cm = ConfusionMatrix([[50, 0], [10, 40]], ("pos", "neg"))
    p, r, f = per_class_prf(cm, 0)
    assert p == pytest.approx(5 / 6, abs=1e-15)
    assert r == 1.0
    assert f == pytest.approx(10 / 11, abs=1e-15)


def test_prf_perfect_and_absent_class():
    cm = ConfusionMatrix([[5, 0, 0], [0, 3, 0], [0, 0, 0]], ("a", "b", "c"))
    assert per_class_prf(cm, 0) == (1.0, 1.0, 1.0)
    assert per_class_prf(cm, 2) == (0.0, 0.0, 0.0)


def test_reconstructed_report_matches_exact_oracle():
    report = classification_report(ConfusionMatrix(RECONSTRUCTED, CLASSES))
    for m, p, r, f in zip(report.per_class, EXPECTED_P, EXPECTED_R, EXPECTED_F):
        assert m.precision == pytest.approx(float(p), abs=1e-9)
        assert m.recall == pytest.approx(float(r), abs=1e-9)
        assert m.f1 == pytest.approx(float(f), abs=1e-9)
        assert m.support == 300
    assert report.accuracy == pytest.approx(878 / 900, abs=1e-9)
    assert report.macro_avg.f1 == pytest.approx(float(sum(EXPECTED_F) / 3), abs=1e-9)


def test_balanced_macro_equals_weighted():
    report = classification_report(ConfusionMatrix(RECONSTRUCTED, CLASSES))
    assert report.macro_avg.precision == pytest.approx(report.weighted_avg.precision, abs=1e-12)
    assert report.macro_avg.f1 == pytest.approx(report.weighted_avg.f1, abs=1e-12)


def test_single_class_report():
    report = classification_report(ConfusionMatrix([[7]], ("only",)))
    assert (report.macro_avg.precision, report.macro_avg.recall, report.macro_avg.f1) == (1.0, 1.0, 1.0)


matrices = st.integers(1, 5).flatmap(
    lambda K: st.lists(st.lists(st.integers(0, 60), min_size=K, max_size=K), min_size=K, max_size=K)
).filter(lambda m: sum(map(sum, m)) > 0)


@settings(max_examples=200, deadline=None)
@given(m=matrices)
def test_metric_identities(m):
    K = len(m)
    cm = ConfusionMatrix(m, tuple(f"c{i}" for i in range(K)))
    report = classification_report(cm)
    counts = np.array(m)
    tp = np.trace(counts)
    # micro precision = micro recall = accuracy for single-label data
    assert tp / counts.sum() == pytest.approx(report.accuracy, abs=1e-12)
    assert sum(c.support for c in report.per_class) == cm.total
    assert report.weighted_avg.recall == pytest.approx(report.accuracy, abs=1e-12)
    for c in report.per_class:
        for v in (c.precision, c.recall, c.f1):
            assert 0.0 <= v <= 1.0
        if c.precision + c.recall > 0:
            assert min(c.precision, c.recall) - 1e-12 <= c.f1 <= max(c.precision, c.recall) + 1e-12
            assert c.f1 <= (c.precision + c.recall) / 2 + 1e-12


@settings(max_examples=100, deadline=None)
@given(m=matrices, seed=st.integers(0, 1000))
def test_report_permutation_invariance(m, seed):
    K = len(m)
    names = tuple(f"c{i}" for i in range(K))
    perm = np.random.default_rng(seed).permutation(K)
    counts = np.array(m)
    base = classification_report(ConfusionMatrix(counts, names))
    moved = classification_report(ConfusionMatrix(counts[np.ix_(perm, perm)], tuple(names[i] for i in perm)))
    by_name = {c.label: c for c in moved.per_class}
    for c in base.per_class:
        other = by_name[c.label]
        assert (c.precision, c.recall, c.f1, c.support) == (other.precision, other.recall, other.f1, other.support)
    assert base.accuracy == moved.accuracy
    assert base.macro_avg.f1 == pytest.approx(moved.macro_avg.f1, abs=1e-12)
