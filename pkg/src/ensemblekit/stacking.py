"""Two-level stacking: base-model class probabilities feed a logistic meta-model.

Meta-training features are produced out-of-fold by default, so no row of the
meta-feature matrix comes from a base model that saw that row's label. The
``leakage`` switch reproduces the literal variant where base models trained
on the full training set also produce the meta-training features.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError, DataError, InvariantError
from .learners import fit_learner, fit_logreg
from .rng import SplitMix64, check_seed, derive_seed

log = logging.getLogger(__name__)

DEFAULT_FOLDS = 5


@dataclass(frozen=True, eq=False)
class StackingModel:
    base_models: tuple
    meta_model: object
    folds: int
    classes: tuple
    leakage: bool = False

    @property
    def n_features(self):
        return self.base_models[0].n_features

    def meta_features(self, X):
        return build_meta_features(self.base_models, X)

    def predict(self, X):
        return self.meta_model.predict(self.meta_features(X))


def build_meta_features(base_models, X):
    """Concatenate each base model's class probabilities, in list order.

    Accepts one feature vector (returns k*K values) or a matrix (returns
    n x k*K).
    """
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    Z = np.hstack([m.predict_proba(X.reshape(1, -1) if single else X) for m in base_models])
    return Z[0] if single else Z


def stratified_folds(y, K, folds, seed):
    """Fold index per sample: each class is shuffled and dealt round-robin."""
    y = np.asarray(y)
    rng = SplitMix64(seed)
    assignment = np.empty(len(y), dtype=np.int64)
    for c in range(K):
        members = rng.shuffle(np.flatnonzero(y == c).tolist())
        for j, pos in enumerate(members):
            assignment[pos] = j % folds
    return assignment


def _uniform(n):
    return np.full(n, 1.0 / n)


def out_of_fold_meta_features(train, base_specs, folds, seed, records=None):
    """Returns (Z, fold_assignment)."""
    assignment = stratified_folds(train.y, train.K, folds, derive_seed(seed, 0))
    K = train.K
    Z = np.full((train.n, len(base_specs) * K), np.nan)
    for j in range(folds):
        held = np.flatnonzero(assignment == j)
        fit_idx = np.flatnonzero(assignment != j)
        if np.intersect1d(held, fit_idx).size:
            raise InvariantError(f"fold {j}: held-out rows overlap the base-model training rows")
        fit_part = train.subset(fit_idx)
        for b, spec in enumerate(base_specs):
            model = fit_learner(spec, fit_part, seed=derive_seed(seed, 1 + b))
            Z[held, b * K:(b + 1) * K] = model.predict_proba(train.X[held])
            if records is not None:
                records.append({
                    "stage": "fold",
                    "fold": j,
                    "base": b,
                    "n_fit": fit_part.n,
                    "n_heldout": len(held),
                    "accuracy": float(np.mean(model.predict(train.X[held]) == train.y[held])),
                })
    if np.isnan(Z).any():
        raise InvariantError("a meta-feature row was never filled by its held-out fold")
    return Z, assignment


def fit_stacking(train, base_specs, meta_spec, folds=DEFAULT_FOLDS, seed=0, leakage=False, records=None):
    base_specs = list(base_specs)
    if not base_specs:
        raise ConfigError("stacking needs at least one base learner")
    if meta_spec.kind != "logreg":
        raise ConfigError("the stacking meta-model must be a logreg learner")
    if isinstance(folds, bool) or not isinstance(folds, int) or folds < 2:
        raise ConfigError(f"folds must be an integer >= 2, got {folds!r}")
    check_seed(seed)
    counts = train.class_counts()
    if counts.min() < folds:
        c = int(np.argmin(counts))
        raise DataError(f"class {train.classes[c]!r} has {counts[c]} samples, fewer than folds={folds}")

    final = tuple(
        fit_learner(spec, train, seed=derive_seed(seed, 1 + b)) for b, spec in enumerate(base_specs)
    )
    if leakage:
        Z = build_meta_features(final, train.X)
    else:
        Z, _ = out_of_fold_meta_features(train, base_specs, folds, seed, records)

    meta_train = Dataset(Z, train.y, train.classes)
    meta = fit_logreg(meta_train, _uniform(train.n), meta_spec, seed=derive_seed(seed, 1 + len(base_specs)))
    if records is not None:
        records.append({
            "stage": "meta",
            "fold": "",
            "base": "",
            "n_fit": train.n,
            "n_heldout": 0,
            "accuracy": float(np.mean(meta.predict(Z) == train.y)),
        })
    log.debug("stacking fit: %d bases, %d folds, leakage=%s", len(final), folds, leakage)
    return StackingModel(final, meta, folds, train.classes, leakage)


def predict_stacking(model, x):
    z = build_meta_features(model.base_models, np.asarray(x, dtype=np.float64))
    return int(model.meta_model.predict(z.reshape(1, -1))[0])
