"""Weak learners: weighted multinomial logistic regression and decision stumps.

Both learners accept per-sample weights natively, which is how boosting
trains them on "weighted data". Images become feature vectors through
:func:`extract_features`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .imaging import resize

LEARNER_KINDS = ("logreg", "stump")
FEATURE_METHODS = ("histogram24", "downsample192")
WEIGHT_SUM_TOL = 1e-6
# candidates whose weighted error is within this of the best count as ties
TIE_TOL = 1e-12


@dataclass(frozen=True)
class LearnerSpec:
    kind: str = "logreg"
    learning_rate: float = 0.5
    epochs: int = 200
    l2: float = 0.0

    def __post_init__(self):
        if self.kind not in LEARNER_KINDS:
            raise ConfigError(f"unknown learner kind {self.kind!r}; expected one of {LEARNER_KINDS}")
        if not (isinstance(self.learning_rate, (int, float)) and self.learning_rate > 0):
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate!r}")
        if isinstance(self.epochs, bool) or not isinstance(self.epochs, int) or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs!r}")
        if not (isinstance(self.l2, (int, float)) and self.l2 >= 0):
            raise ConfigError(f"l2 must be >= 0, got {self.l2!r}")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        unknown = set(d) - {"kind", "learning_rate", "epochs", "l2"}
        if unknown:
            raise ConfigError(f"unknown learner fields: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self):
        if self.kind == "stump":
            return {"kind": "stump"}
        return {"kind": self.kind, "learning_rate": self.learning_rate, "epochs": self.epochs, "l2": self.l2}


def _check_dim(X, d):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != d:
        raise DataError(f"feature dimensionality mismatch: model expects d={d}, found d={X.shape[1]}")
    return X


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class LogRegModel:
    weights: np.ndarray  # K x d
    biases: np.ndarray  # K
    classes: tuple

    @property
    def n_features(self):
        return self.weights.shape[1]

    def decision_function(self, X):
        X = _check_dim(X, self.n_features)
        return X @ self.weights.T + self.biases

    def predict_proba(self, X):
        return softmax(self.decision_function(X))

    def predict(self, X):
        # np.argmax returns the first maximum, i.e. the lowest class index on ties
        return np.argmax(self.decision_function(X), axis=1)


@dataclass(frozen=True, eq=False)
class StumpModel:
    feature: int
    threshold: float
    left: int
    right: int
    classes: tuple
    n_features: int
    error: float = field(default=0.0, compare=False)

    def predict(self, X):
        X = _check_dim(X, self.n_features)
        return np.where(X[:, self.feature] <= self.threshold, self.left, self.right)

    def predict_proba(self, X):
        """Degenerate one-hot distribution on the predicted class."""
        return np.eye(len(self.classes))[self.predict(X)]


def predict_proba(model, x):
    return model.predict_proba(np.asarray(x, dtype=np.float64).reshape(1, -1))[0]


def predict_label(model, x):
    return int(model.predict(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])


def check_weights(weights, n):
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise DataError(f"expected {n} sample weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DataError("sample weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise DataError(f"sample weights must sum to 1 (got {w.sum():.12g})")
    return w


def logreg_loss_and_grad(W, b, X, y, sample_weights, l2):
    """Weighted softmax cross-entropy plus (l2/2)||W||^2 and its gradient."""
    P = softmax(X @ W.T + b)
    n = X.shape[0]
    picked = np.clip(P[np.arange(n), y], 1e-300, None)
    loss = -np.dot(sample_weights, np.log(picked)) + 0.5 * l2 * np.sum(W * W)
    G = P
    G[np.arange(n), y] -= 1.0
    G *= sample_weights[:, None]
    grad_W = G.T @ X + l2 * W
    grad_b = G.sum(axis=0)
    return loss, grad_W, grad_b


def stable_learning_rate(X, sample_weights, l2=0.0):
    """1/L for L an upper bound on the loss curvature.

    The softmax cross-entropy Hessian in the logits is bounded by 1/2, so
    L = 1/2 * sum_i w_i (|x_i|^2 + 1) + l2. Gradient descent with any step
    up to 2/L never increases the loss; this returns the conservative 1/L.
    """
    X = np.asarray(X, dtype=np.float64)
    L = 0.5 * np.dot(sample_weights, np.sum(X * X, axis=1) + 1.0) + l2
    return 1.0 / L


def fit_logreg(ds, weights, spec, seed=0, loss_history=None):
    """Full-batch gradient descent from zero parameters for ``spec.epochs`` steps.

    ``seed`` is accepted for interface symmetry; the optimizer is deterministic.
    If ``loss_history`` is a list, the loss before each step and after the
    last step is appended to it.
    """
    if ds.n < 1:
        raise DataError("cannot fit on an empty dataset")
    w = check_weights(weights, ds.n)
    K, d = ds.K, ds.d
    W = np.zeros((K, d))
    b = np.zeros(K)
    for _ in range(spec.epochs):
        loss, gW, gb = logreg_loss_and_grad(W, b, ds.X, ds.y, w, spec.l2)
        if loss_history is not None:
            loss_history.append(loss)
        W -= spec.learning_rate * gW
        b -= spec.learning_rate * gb
    if loss_history is not None:
        loss_history.append(logreg_loss_and_grad(W, b, ds.X, ds.y, w, spec.l2)[0])
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
        raise DataError("logistic regression diverged; lower the learning rate")
    return LogRegModel(W, b, ds.classes)


def _side_labels(class_weights):
    """Weighted-majority label per row, lowest index among near-ties."""
    best = class_weights.max(axis=1, keepdims=True)
    return np.argmax(class_weights >= best - TIE_TOL, axis=1)


def fit_stump(ds, weights):
    """Exhaustive search over features and midpoints of consecutive distinct values."""
    if ds.n < 1:
        raise DataError("cannot fit on an empty dataset")
    w = check_weights(weights, ds.n)
    K = ds.K
    onehot = np.zeros((ds.n, K))
    onehot[np.arange(ds.n), ds.y] = w

    candidates = []  # (error, feature, threshold, left, right) in (feature, threshold) order
    for f in range(ds.d):
        order = np.argsort(ds.X[:, f], kind="stable")
        xs = ds.X[order, f]
        cw = onehot[order]
        cut = np.flatnonzero(xs[:-1] < xs[1:])
        if cut.size == 0:
            continue
        left = np.cumsum(cw, axis=0)[cut]
        right = np.cumsum(cw[::-1], axis=0)[::-1][cut + 1]
        err = (left.sum(1) - left.max(1)) + (right.sum(1) - right.max(1))
        lo, hi = xs[cut], xs[cut + 1]
        thr = (lo + hi) / 2.0
        # adjacent doubles can round the midpoint up onto the right-hand value
        thr = np.where(thr < hi, thr, lo)
        for e, t, l, r in zip(err, thr, _side_labels(left), _side_labels(right)):
            candidates.append((float(e), f, float(t), int(l), int(r)))

    if not candidates:
        totals = onehot.sum(axis=0)[None, :]
        label = int(_side_labels(totals)[0])
        err = float(totals.sum() - totals.max())
        return StumpModel(0, float(ds.X[0, 0]), label, label, ds.classes, ds.d, err)

    best = min(c[0] for c in candidates)
    e, f, t, l, r = next(c for c in candidates if c[0] <= best + TIE_TOL)
    return StumpModel(f, t, l, r, ds.classes, ds.d, max(e, 0.0))


def fit_learner(spec, ds, weights=None, seed=0):
    if weights is None:
        weights = np.full(ds.n, 1.0 / ds.n)
    if spec.kind == "logreg":
        return fit_logreg(ds, weights, spec, seed)
    return fit_stump(ds, weights)


def extract_features(img, method="histogram24"):
    """Image -> feature vector.

    ``histogram24``: 8 intensity bins per channel (bin b holds [32b, 32b+32)),
    each channel normalized to sum 1, channels concatenated R, G, B.
    ``downsample192``: nearest-neighbour resize to 8x8, scaled to [0, 1],
    flattened row-major with interleaved channels.
    """
    if method == "histogram24":
        px = img.pixels.reshape(-1, 3)
        bins = px // 32
        hist = np.stack([np.bincount(bins[:, ch], minlength=8) for ch in range(3)])
        return (hist / px.shape[0]).reshape(-1)
    if method == "downsample192":
        return resize(img, 8, 8).pixels.astype(np.float64).reshape(-1) / 255.0
    raise ConfigError(f"unknown feature method {method!r}; expected one of {FEATURE_METHODS}")
