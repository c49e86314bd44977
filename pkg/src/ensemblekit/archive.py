"""Versioned JSON model archives.

Reals are stored as their shortest round-trip decimal strings, so
save -> load -> save reproduces the file byte for byte.
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .bagging import BaggingModel
from .boosting import BoostModel, Round
from .errors import DataError
from .learners import LogRegModel, StumpModel
from .stacking import StackingModel

FORMAT_VERSION = 1


def _real(x):
    return repr(float(x))


def _reals(arr):
    arr = np.asarray(arr)
    if arr.ndim == 1:
        return [_real(v) for v in arr]
    return [_reals(row) for row in arr]


def _parse_reals(values):
    return np.array(values, dtype=np.float64) if values else np.zeros(0)


def learner_to_dict(model):
    if isinstance(model, LogRegModel):
        return {"kind": "logreg", "weights": _reals(model.weights), "biases": _reals(model.biases)}
    if isinstance(model, StumpModel):
        return {
            "kind": "stump",
            "n_features": model.n_features,
            "feature": model.feature,
            "threshold": _real(model.threshold),
            "left": model.left,
            "right": model.right,
        }
    raise TypeError(f"cannot serialize learner {type(model).__name__}")


def learner_from_dict(d, classes):
    if d["kind"] == "logreg":
        W = np.array([[float(v) for v in row] for row in d["weights"]], dtype=np.float64)
        b = np.array([float(v) for v in d["biases"]], dtype=np.float64)
        if W.shape[0] != len(classes) or b.shape != (len(classes),):
            raise DataError("archived logreg parameters do not match the class registry")
        return LogRegModel(W, b, classes)
    if d["kind"] == "stump":
        return StumpModel(
            int(d["feature"]), float(d["threshold"]), int(d["left"]), int(d["right"]), classes, int(d["n_features"])
        )
    raise DataError(f"unknown learner kind {d['kind']!r} in archive")


def config_hash(config):
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def model_to_archive(model, provenance=None):
    if isinstance(model, BaggingModel):
        method = "bagging"
        params = {
            "members": [{"seed": s, "model": learner_to_dict(m)} for s, m in zip(model.seeds, model.members)],
        }
    elif isinstance(model, BoostModel):
        method = "boosting"
        params = {
            "mode": model.mode,
            "rounds": [
                {"eps": _real(r.eps), "alpha": _real(r.alpha), "model": learner_to_dict(r.model)}
                for r in model.rounds
            ],
        }
    elif isinstance(model, StackingModel):
        method = "stacking"
        params = {
            "folds": model.folds,
            "leakage": model.leakage,
            "base_models": [learner_to_dict(m) for m in model.base_models],
            "meta_model": learner_to_dict(model.meta_model),
        }
    else:
        raise TypeError(f"cannot archive {type(model).__name__}")
    return {
        "format_version": FORMAT_VERSION,
        "method": method,
        "classes": list(model.classes),
        "n_features": model.n_features,
        "params": params,
        "provenance": dict(provenance or {}, artifact_version=__version__),
    }


def archive_to_model(doc):
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(f"archive format_version {version!r} is not supported (expected {FORMAT_VERSION})")
    classes = tuple(doc["classes"])
    p = doc["params"]
    method = doc["method"]
    if method == "bagging":
        members = tuple(learner_from_dict(m["model"], classes) for m in p["members"])
        return BaggingModel(members, tuple(int(m["seed"]) for m in p["members"]), classes)
    if method == "boosting":
        rounds = tuple(
            Round(learner_from_dict(r["model"], classes), float(r["eps"]), float(r["alpha"])) for r in p["rounds"]
        )
        return BoostModel(rounds, p["mode"], classes)
    if method == "stacking":
        bases = tuple(learner_from_dict(m, classes) for m in p["base_models"])
        meta = learner_from_dict(p["meta_model"], classes)
        return StackingModel(bases, meta, int(p["folds"]), classes, bool(p["leakage"]))
    raise DataError(f"unknown ensemble method {method!r} in archive")


def dumps(doc):
    return json.dumps(doc, indent=1) + "\n"


def save_model(model, path, provenance=None):
    text = dumps(model_to_archive(model, provenance))
    Path(path).write_text(text, encoding="utf-8")
    return text


def load_archive(path):
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: archive not found")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not a valid archive ({exc})") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise DataError(f"{path}: missing format_version")
    return doc


def load_model(path):
    return archive_to_model(load_archive(path))
