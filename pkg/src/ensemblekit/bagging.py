"""Bootstrap aggregating with hard majority voting."""

import logging
from dataclasses import dataclass

import numpy as np

from .data import bootstrap_indices
from .errors import ConfigError, DataError
from .learners import fit_learner
from .rng import check_seed, derive_seeds

log = logging.getLogger(__name__)

DEFAULT_MEMBERS = 6


@dataclass(frozen=True, eq=False)
class BaggingModel:
    members: tuple
    seeds: tuple
    classes: tuple

    @property
    def n_features(self):
        return self.members[0].n_features

    def votes(self, X):
        """(n_samples, m) matrix of member predictions."""
        return np.column_stack([m.predict(X) for m in self.members])

    def predict(self, X):
        K = len(self.classes)
        counts = np.apply_along_axis(np.bincount, 1, self.votes(X), minlength=K)
        return np.argmax(counts, axis=1)


def majority_vote(votes, K):
    """Most frequent class index; ties go to the lowest index."""
    votes = list(votes)
    if not votes:
        raise ValueError("majority_vote needs at least one vote")
    if any(not 0 <= v < K for v in votes):
        raise ValueError(f"vote outside [0, {K})")
    return int(np.argmax(np.bincount(votes, minlength=K)))


def fit_bagging(train, m, spec, seed, records=None):
    """Member i is fit with uniform weights on ``bootstrap_sample(train, seed_i)``.

    ``seed_i`` is the i-th output of SplitMix64(seed). If ``records`` is a
    list, one dict per member is appended for the training log.
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ConfigError(f"number of bagging members must be a positive integer, got {m!r}")
    if train.n < 1:
        raise DataError("cannot fit bagging on an empty dataset")
    check_seed(seed)
    seeds = derive_seeds(seed, m)
    members = []
    for i, s in enumerate(seeds):
        idx = bootstrap_indices(train.n, s)
        members.append(fit_learner(spec, train.subset(idx), seed=s))
        if records is not None:
            records.append({
                "member": i,
                "seed": s,
                "unique_samples": len(set(idx)),
                "train_accuracy": float(np.mean(members[-1].predict(train.X) == train.y)),
            })
        log.debug("bagging member %d/%d fit (seed %d)", i + 1, m, s)
    return BaggingModel(tuple(members), tuple(seeds), train.classes)


def predict_bagging(model, x):
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return majority_vote([int(mem.predict(x)[0]) for mem in model.members], len(model.classes))
