"""AdaBoost in two flavours.

``binary`` follows the classic two-class rule: labels map to y in {-1, +1}
(class 0 -> -1), alpha = 1/2 ln((1 - eps) / eps), weights scale by
exp(-alpha * y * h) and the ensemble predicts sign(sum alpha_t h_t).

``samme`` is the multiclass generalization: alpha = ln((1 - eps) / eps) +
ln(K - 1), misclassified samples scale by exp(alpha), and the ensemble
predicts the alpha-weighted vote argmax.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, InvariantError
from .learners import fit_learner
from .rng import check_seed, derive_seeds

log = logging.getLogger(__name__)

MODES = ("binary", "samme")
EPS_CLAMP = 1e-10
WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Round:
    model: object
    eps: float
    alpha: float


@dataclass(frozen=True, eq=False)
class BoostModel:
    rounds: tuple
    mode: str
    classes: tuple

    @property
    def K(self):
        return len(self.classes)

    @property
    def n_features(self):
        return self.rounds[0].model.n_features

    @property
    def history(self):
        return [(t + 1, r.eps, r.alpha) for t, r in enumerate(self.rounds)]

    def scores(self, X):
        """Alpha-weighted class votes, shape (n_samples, K)."""
        out = None
        for r in self.rounds:
            pred = r.model.predict(X)
            if out is None:
                out = np.zeros((len(pred), self.K))
            out[np.arange(len(pred)), pred] += r.alpha
        return out

    def predict(self, X):
        if self.mode == "binary":
            total = None
            for r in self.rounds:
                h = 2.0 * r.model.predict(X) - 1.0
                total = r.alpha * h if total is None else total + r.alpha * h
            # sign 0 resolves to class 0
            return (total > 0).astype(np.int64)
        return np.argmax(self.scores(X), axis=1)


def init_weights(n):
    if n < 1:
        raise ValueError("n must be at least 1")
    return np.full(n, 1.0 / n)


def weighted_error(preds, labels, w):
    preds, labels, w = np.asarray(preds), np.asarray(labels), np.asarray(w, dtype=np.float64)
    if not preds.shape == labels.shape == w.shape:
        raise ValueError(f"length mismatch: {preds.shape}, {labels.shape}, {w.shape}")
    return float(np.sum(w[preds != labels]))


def clamp_eps(eps):
    return min(max(eps, EPS_CLAMP), 1.0 - EPS_CLAMP)


def model_weight(eps, mode="binary", K=2):
    eps = clamp_eps(eps)
    if mode == "binary":
        return 0.5 * math.log((1.0 - eps) / eps)
    if mode == "samme":
        return math.log((1.0 - eps) / eps) + math.log(K - 1)
    raise ConfigError(f"unknown boosting mode {mode!r}")


def update_weights(w, alpha, preds, labels, mode="binary"):
    w = np.asarray(w, dtype=np.float64)
    preds, labels = np.asarray(preds), np.asarray(labels)
    if mode == "binary":
        y = 2.0 * labels - 1.0
        h = 2.0 * preds - 1.0
        new = w * np.exp(-alpha * y * h)
    elif mode == "samme":
        new = w * np.exp(alpha * (preds != labels))
    else:
        raise ConfigError(f"unknown boosting mode {mode!r}")
    total = new.sum()
    if not (total > 0 and math.isfinite(total)):
        raise InvariantError("sample weights collapsed during the boosting update (degenerate alpha)")
    return new / total


def stop_threshold(mode, K):
    return 0.5 if mode == "binary" else (K - 1) / K


def fit_boosting(train, T, spec, mode="samme", seed=0, weight_trace=None):
    """Run up to T rounds; a round at or above chance error ends training and is discarded.

    If ``weight_trace`` is a list, the normalized weights after each accepted
    round are appended to it.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown boosting mode {mode!r}; expected one of {MODES}")
    if isinstance(T, bool) or not isinstance(T, int) or T < 1:
        raise ConfigError(f"number of boosting rounds must be a positive integer, got {T!r}")
    if mode == "binary" and train.K != 2:
        raise ConfigError(f"binary boosting needs exactly 2 classes, dataset has {train.K}")
    if train.K < 2:
        raise DataError("boosting needs at least two classes")
    check_seed(seed)

    limit = stop_threshold(mode, train.K)
    w = init_weights(train.n)
    rounds = []
    for t, round_seed in enumerate(derive_seeds(seed, T)):
        model = fit_learner(spec, train, w, seed=round_seed)
        preds = model.predict(train.X)
        eps = weighted_error(preds, train.y, w)
        if eps >= limit:
            log.info("boosting round %d: eps=%.6g at/above %.6g, stopping", t + 1, eps, limit)
            break
        alpha = model_weight(eps, mode, train.K)
        w = update_weights(w, alpha, preds, train.y, mode)
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise InvariantError(f"sample weights sum to {w.sum()!r} after round {t + 1}")
        rounds.append(Round(model, clamp_eps(eps), alpha))
        if weight_trace is not None:
            weight_trace.append(w.copy())
        log.debug("boosting round %d: eps=%.6g alpha=%.6g", t + 1, eps, alpha)
    if not rounds:
        raise DataError(
            f"first boosting round has weighted error at or above chance ({limit:.4g}); no model to return"
        )
    return BoostModel(tuple(rounds), mode, train.classes)


def predict_boosting(model, x):
    return int(model.predict(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

