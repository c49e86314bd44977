"""Datasets, feature-CSV ingestion, class balancing, splitting and resampling.

Labels are stored as integer class indices into ``Dataset.classes``, an
ordered tuple of unique class names.
"""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .rng import SplitMix64, check_seed

DEFAULT_FRACTIONS = (0.70, 0.15, 0.15)


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    classes: tuple
    feature_names: tuple = None

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64)
        y = np.array(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise DataError(f"feature matrix must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DataError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if X.shape[1] < 1:
            raise DataError("datasets need at least one feature")
        if not np.all(np.isfinite(X)):
            raise DataError("feature matrix contains NaN or infinite values")
        classes = tuple(str(c) for c in self.classes)
        if not classes or any(not c for c in classes) or len(set(classes)) != len(classes):
            raise DataError(f"class names must be unique and nonempty: {classes!r}")
        if y.size and (y.min() < 0 or y.max() >= len(classes)):
            raise DataError("label index outside the class registry")
        names = self.feature_names
        if names is None:
            names = tuple(f"f{j}" for j in range(X.shape[1]))
        names = tuple(names)
        if len(names) != X.shape[1]:
            raise DataError("feature_names length does not match feature count")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def K(self):
        return len(self.classes)

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], self.classes, self.feature_names)

    def class_counts(self):
        return np.bincount(self.y, minlength=self.K)

    def relabel(self, classes):
        """Re-express labels against another class ordering (by name)."""
        classes = tuple(classes)
        lookup = {name: i for i, name in enumerate(classes)}
        try:
            mapping = np.array([lookup[name] for name in self.classes], dtype=np.int64)
        except KeyError as exc:
            raise DataError(f"class {exc.args[0]!r} is not known to the model") from None
        return Dataset(self.X, mapping[self.y], classes, self.feature_names)


def load_feature_csv(path, classes=None):
    """Read a feature CSV whose final column is ``label``.

    Classes are registered in first-appearance order unless ``classes`` fixes
    the ordering, in which case unknown labels are an error.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: file not found")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = rows[0]
    if len(header) < 2 or header[-1] != "label":
        raise DataError(f"{path}: row 1: header must list feature columns then 'label'")
    rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")

    registry = list(classes) if classes is not None else []
    index = {name: i for i, name in enumerate(registry)}
    X = np.empty((len(rows), len(header) - 1))
    y = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        lineno = r + 2
        if len(row) != len(header):
            raise DataError(f"{path}: row {lineno}: expected {len(header)} columns, found {len(row)}")
        for c, cell in enumerate(row[:-1]):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {lineno}, column {c + 1} ({header[c]}): non-numeric value {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise DataError(f"{path}: row {lineno}, column {c + 1} ({header[c]}): non-finite value")
            X[r, c] = value
        name = row[-1]
        if name not in index:
            if classes is not None:
                raise DataError(f"{path}: row {lineno}: unknown class {name!r}")
            if not name:
                raise DataError(f"{path}: row {lineno}: empty label")
            index[name] = len(registry)
            registry.append(name)
        y[r] = index[name]
    return Dataset(X, y, tuple(registry), tuple(header[:-1]))


def format_real(value):
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def write_feature_csv(ds, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*ds.feature_names, "label"])
        for x, label in zip(ds.X, ds.y):
            writer.writerow([*(format_real(v) for v in x), ds.classes[label]])


def _positions_by_class(y, K):
    return [np.flatnonzero(y == c).tolist() for c in range(K)]


def balance_indices(y, K, n_per_class, seed):
    """Positions realizing exactly ``n_per_class`` samples of each class.

    Surplus classes keep a seeded subset (original order preserved); deficit
    classes keep every sample and append seeded draws with replacement.
    """
    if n_per_class < 1:
        raise ConfigError("n_per_class must be at least 1")
    rng = SplitMix64(check_seed(seed))
    out = []
    for c, members in enumerate(_positions_by_class(np.asarray(y), K)):
        if not members:
            raise DataError(f"class index {c} has no samples to balance")
        if len(members) >= n_per_class:
            chosen = sorted(rng.shuffle(list(members))[:n_per_class])
        else:
            extra = rng.choices(len(members), n_per_class - len(members))
            chosen = members + [members[j] for j in extra]
        out.extend(chosen)
    return out


def balance_classes(ds, n_per_class, seed):
    return ds.subset(balance_indices(ds.y, ds.K, n_per_class, seed))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = DEFAULT_FRACTIONS[0]
    val_fraction: float = DEFAULT_FRACTIONS[1]
    test_fraction: float = DEFAULT_FRACTIONS[2]
    seed: int = 0

    def __post_init__(self):
        fractions = (self.train_fraction, self.val_fraction, self.test_fraction)
        if any(not 0.0 < f < 1.0 for f in fractions):
            raise ConfigError(f"split fractions must lie in (0, 1), got {fractions}")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1, got {sum(fractions)!r}")
        check_seed(self.seed)


def stratified_split_indices(y, K, spec):
    """Per-class seeded shuffle, then floor/floor/remainder partition."""
    rng = SplitMix64(spec.seed)
    parts = ([], [], [])
    for c, members in enumerate(_positions_by_class(np.asarray(y), K)):
        n_c = len(members)
        if n_c < 3:
            raise DataError(f"class index {c} has {n_c} samples; stratified splitting needs at least 3")
        rng.shuffle(members)
        # the epsilon keeps e.g. 0.7 * 90 (62.999...) from flooring to 62
        n_train = math.floor(spec.train_fraction * n_c + 1e-9)
        n_val = math.floor(spec.val_fraction * n_c + 1e-9)
        chunks = (members[:n_train], members[n_train:n_train + n_val], members[n_train + n_val:])
        for name, part, chunk in zip(("train", "val", "test"), parts, chunks):
            if not chunk:
                raise DataError(f"{name} split receives no samples of class index {c} ({n_c} available)")
            part.extend(chunk)
    return tuple(sorted(p) for p in parts)


def stratified_split(ds, spec):
    return tuple(ds.subset(idx) for idx in stratified_split_indices(ds.y, ds.K, spec))


def bootstrap_indices(n, seed):
    if n < 1:
        raise DataError("cannot bootstrap an empty dataset")
    return SplitMix64(check_seed(seed)).choices(n, n)


def bootstrap_sample(ds, seed):
    return ds.subset(bootstrap_indices(ds.n, seed))


def load_unlabeled_csv(path, n_features=None):
    """Feature matrix from a CSV with a header row; a trailing ``label`` column is ignored."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: file not found")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise DataError(f"{path}: no data rows")
    header = rows[0]
    d = len(header) - 1 if header and header[-1] == "label" else len(header)
    if n_features is not None and d != n_features:
        raise DataError(f"{path}: model expects d={n_features} feature columns, found d={d}")
    X = np.empty((len(rows) - 1, d))
    for r, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r + 2}: expected {len(header)} columns, found {len(row)}")
        for c in range(d):
            try:
                X[r, c] = float(row[c])
            except ValueError:
                raise DataError(f"{path}: row {r + 2}, column {c + 1}: non-numeric value {row[c]!r}") from None
    if not np.all(np.isfinite(X)):
        raise DataError(f"{path}: non-finite feature value")
    return X
