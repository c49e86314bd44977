"""Run configuration: JSON document + command-line overrides.

Keys absent from the file take the defaults below. Overrides use dotted
paths (``--set bagging.m=10``); the value is parsed as JSON when possible
and kept as a string otherwise.
"""

import copy
import json
from pathlib import Path

from .data import SplitSpec
from .errors import ConfigError
from .imaging import AUGMENT_OPS
from .learners import FEATURE_METHODS, LearnerSpec
from .rng import check_seed

METHODS = ("bagging", "boosting", "stacking")

DEFAULTS = {
    "seed": 0,
    "out": "runs",
    "data": {
        "path": None,
        "format": "csv",
        "features": "histogram24",
        "size": [240, 240],
        "n_per_class": None,
        "augment": list(AUGMENT_OPS),
    },
    "split": {"train": 0.70, "val": 0.15, "test": 0.15},
    "train_path": None,
    "test_path": None,
    "method": "bagging",
    "bagging": {"m": 6, "learner": {"kind": "logreg", "learning_rate": 0.5, "epochs": 200, "l2": 0.0}},
    "boosting": {"T": 20, "mode": "samme", "learner": {"kind": "stump"}},
    "stacking": {
        "folds": 5,
        "meta_leakage_mode": False,
        "bases": [
            {"kind": "logreg", "learning_rate": 0.1, "epochs": 100, "l2": 0.0},
            {"kind": "logreg", "learning_rate": 0.5, "epochs": 200, "l2": 0.0},
            {"kind": "logreg", "learning_rate": 1.0, "epochs": 400, "l2": 0.0},
            {"kind": "logreg", "learning_rate": 0.5, "epochs": 200, "l2": 0.01},
            {"kind": "logreg", "learning_rate": 0.05, "epochs": 50, "l2": 0.0},
            {"kind": "stump"},
        ],
        "meta": {"kind": "logreg", "learning_rate": 0.5, "epochs": 300, "l2": 0.0},
    },
}

# keys that only say where files go; excluded from the provenance hash
LOCATION_KEYS = ("out",)


def _merge(base, update, path=""):
    for key, value in update.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            _merge(base[key], value, where + ".")
        else:
            base[key] = value
    return base


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(config, assignment):
    key, sep, raw = assignment.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {assignment!r} is not of the form key.path=value")
    parts = key.split(".")
    node = config
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ConfigError(f"unknown config key {key!r}")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigError(f"unknown config key {key!r}")
    node[parts[-1]] = _parse_value(raw)


def load_config(path=None, overrides=()):
    config = copy.deepcopy(DEFAULTS)
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"{path}: config file not found")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: top level must be an object")
        _merge(config, doc)
    for assignment in overrides:
        apply_override(config, assignment)
    validate(config)
    return config


def _positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")


def learner_specs(config):
    """Parse every learner spec in the config, raising ConfigError on the first bad one."""
    st = config["stacking"]
    return {
        "bagging": LearnerSpec.from_dict(config["bagging"]["learner"]),
        "boosting": LearnerSpec.from_dict(config["boosting"]["learner"]),
        "stacking_bases": [LearnerSpec.from_dict(b) for b in st["bases"]],
        "stacking_meta": LearnerSpec.from_dict(st["meta"]),
    }


def split_spec(config, seed):
    s = config["split"]
    return SplitSpec(s["train"], s["val"], s["test"], seed)


def validate(config):
    check_seed(config["seed"])
    split_spec(config, 0)
    data = config["data"]
    if data["format"] not in ("csv", "images"):
        raise ConfigError(f"data.format must be 'csv' or 'images', got {data['format']!r}")
    if data["features"] not in FEATURE_METHODS:
        raise ConfigError(f"data.features must be one of {FEATURE_METHODS}")
    size = data["size"]
    if not (isinstance(size, list) and len(size) == 2):
        raise ConfigError("data.size must be [width, height]")
    for v in size:
        _positive_int(v, "data.size entries")
    if data["n_per_class"] is not None:
        _positive_int(data["n_per_class"], "data.n_per_class")
    bad = [op for op in data["augment"] if op not in AUGMENT_OPS]
    if bad:
        raise ConfigError(f"unknown augmentation ops {bad}; choose from {AUGMENT_OPS}")
    if config["method"] not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {config['method']!r}")
    _positive_int(config["bagging"]["m"], "bagging.m")
    _positive_int(config["boosting"]["T"], "boosting.T")
    if config["boosting"]["mode"] not in ("binary", "samme"):
        raise ConfigError("boosting.mode must be 'binary' or 'samme'")
    folds = config["stacking"]["folds"]
    if isinstance(folds, bool) or not isinstance(folds, int) or folds < 2:
        raise ConfigError(f"stacking.folds must be an integer >= 2, got {folds!r}")
    if not isinstance(config["stacking"]["meta_leakage_mode"], bool):
        raise ConfigError("stacking.meta_leakage_mode must be true or false")
    specs = learner_specs(config)
    if not specs["stacking_bases"]:
        raise ConfigError("stacking.bases must list at least one learner")
    if specs["stacking_meta"].kind != "logreg":
        raise ConfigError("stacking.meta must be a logreg learner")
    return config


def provenance_config(config):
    return {k: v for k, v in config.items() if k not in LOCATION_KEYS}
