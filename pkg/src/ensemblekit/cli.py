"""ensemblekit command line.

    ensemblekit <split|train|evaluate|compare|predict> --config <path> [overrides...] --seed <u64> --out <dir>

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
invariant violation.
"""

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .archive import config_hash, load_model, save_model
from .bagging import fit_bagging
from .boosting import fit_boosting
from .config import METHODS, learner_specs, load_config, provenance_config, split_spec
from .data import (
    Dataset,
    balance_indices,
    load_feature_csv,
    load_unlabeled_csv,
    stratified_split_indices,
    write_feature_csv,
)
from .errors import ConfigError, DataError, EnsembleError
from .imaging import augment, load_image_dir, resize
from .learners import extract_features
from .metrics import classification_report, confusion_matrix
from .report import (
    comparison_csv,
    comparison_svg,
    comparison_text,
    confusion_csv,
    confusion_svg,
    report_json,
    report_text,
)
from .rng import SplitMix64, derive_seed
from .stacking import fit_stacking

log = logging.getLogger("ensemblekit")

SPLIT_NAMES = ("train", "val", "test")
METHOD_TITLES = {"bagging": "Bagging", "boosting": "Boosting", "stacking": "Stacking"}


def _out_dir(config):
    out = Path(config["out"])
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {out}: {exc}") from None
    return out


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def _write_records(path, records):
    if not records:
        _write(path, "")
        return
    fields = list(records[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in rec.items()})


def _require(value, what):
    if not value:
        raise ConfigError(f"no {what} given")
    return value


# ---------------------------------------------------------------- split


def _prepare_images(config, seed):
    data = config["data"]
    images, labels, classes = load_image_dir(data["path"])
    K = len(classes)
    if data["n_per_class"]:
        keep = balance_indices(labels, K, data["n_per_class"], derive_seed(seed, 0))
        images = [images[i] for i in keep]
        labels = [labels[i] for i in keep]
    parts = stratified_split_indices(np.array(labels), K, split_spec(config, derive_seed(seed, 1)))
    w, h = data["size"]
    rng = SplitMix64(derive_seed(seed, 2))
    ops = data["augment"]
    datasets, augmented = [], 0
    for name, idx in zip(SPLIT_NAMES, parts):
        feats, ys = [], []
        for i in idx:
            img = resize(images[i], w, h)
            feats.append(extract_features(img, data["features"]))
            ys.append(labels[i])
            # training images get one randomly chosen augmented copy each
            if name == "train" and ops:
                op = ops[rng.below(len(ops))]
                feats.append(extract_features(augment(img, op), data["features"]))
                ys.append(labels[i])
                augmented += 1
        datasets.append(Dataset(np.array(feats), np.array(ys), classes))
    return datasets, augmented


def _prepare_csv(config, seed):
    data = config["data"]
    ds = load_feature_csv(data["path"])
    if data["n_per_class"]:
        ds = ds.subset(balance_indices(ds.y, ds.K, data["n_per_class"], derive_seed(seed, 0)))
    parts = stratified_split_indices(ds.y, ds.K, split_spec(config, derive_seed(seed, 1)))
    return [ds.subset(idx) for idx in parts], 0


def cmd_split(config):
    """Write train/val/test feature CSVs plus manifest.json; returns the manifest."""
    data = config["data"]
    _require(data["path"], "dataset path (--data or data.path)")
    seed = config["seed"]
    if data["format"] == "images":
        datasets, augmented = _prepare_images(config, seed)
    else:
        datasets, augmented = _prepare_csv(config, seed)
    out = _out_dir(config)
    classes = datasets[0].classes
    manifest = {
        "seed": seed,
        "source": str(data["path"]),
        "format": data["format"],
        "fractions": dict(config["split"]),
        "classes": list(classes),
        "counts": {
            name: {c: int(n) for c, n in zip(classes, ds.class_counts())}
            for name, ds in zip(SPLIT_NAMES, datasets)
        },
        "totals": {name: ds.n for name, ds in zip(SPLIT_NAMES, datasets)},
    }
    if data["format"] == "images":
        manifest["features"] = data["features"]
        manifest["size"] = list(data["size"])
        manifest["augmented_train_samples"] = augmented
    for name, ds in zip(SPLIT_NAMES, datasets):
        try:
            write_feature_csv(ds, out / f"{name}.csv")
        except OSError as exc:
            raise DataError(f"cannot write {out / name}.csv: {exc}") from None
    _write(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    log.info("split written to %s: %s", out, manifest["totals"])
    return manifest


# ---------------------------------------------------------------- train


def fit_method(method, train, config):
    """Fit one ensemble; returns (model, log records)."""
    specs = learner_specs(config)
    seed = config["seed"]
    records = []
    if method == "bagging":
        model = fit_bagging(train, config["bagging"]["m"], specs["bagging"], seed, records)
    elif method == "boosting":
        b = config["boosting"]
        model = fit_boosting(train, b["T"], specs["boosting"], b["mode"], seed)
        records = [{"round": t, "eps": eps, "alpha": alpha} for t, eps, alpha in model.history]
    elif method == "stacking":
        st = config["stacking"]
        model = fit_stacking(
            train, specs["stacking_bases"], specs["stacking_meta"], st["folds"], seed,
            leakage=st["meta_leakage_mode"], records=records,
        )
    else:
        raise ConfigError(f"unknown method {method!r}")
    return model, records


def _provenance(config):
    return {"config_hash": config_hash(provenance_config(config)), "seed": config["seed"]}


def _train_into(method, train, config, out):
    model, records = fit_method(method, train, config)
    save_model(model, out / "model.json", _provenance(config))
    _write_records(out / "train_log.csv", records)
    return model


def cmd_train(config):
    train = load_feature_csv(_require(config["train_path"], "training data (--train or train_path)"))
    out = _out_dir(config)
    model = _train_into(config["method"], train, config, out)
    log.info("%s model written to %s", config["method"], out / "model.json")
    return model


# ---------------------------------------------------------------- evaluate


def _evaluate_into(model, ds, out, title):
    if ds.d != model.n_features:
        raise DataError(f"dataset has d={ds.d} features but the model expects d={model.n_features}")
    cm = confusion_matrix(ds.y, model.predict(ds.X), len(model.classes), model.classes)
    report = classification_report(cm)
    _write(out / "report.txt", report_text(report))
    _write(out / "report.json", report_json(report))
    _write(out / "confusion_matrix.csv", confusion_csv(cm))
    _write(out / "confusion_matrix.svg", confusion_svg(cm, f"Confusion Matrix - {title}"))
    return report


def cmd_evaluate(config, model_path):
    model = load_model(_require(model_path, "model archive (--model)"))
    ds = load_feature_csv(_require(config["test_path"], "evaluation data (--test or test_path)"), model.classes)
    out = _out_dir(config)
    title = {"BaggingModel": "Bagging", "BoostModel": "Boosting", "StackingModel": "Stacking"}[type(model).__name__]
    report = _evaluate_into(model, ds, out, title)
    print(report_text(report), end="")
    return report


# ---------------------------------------------------------------- compare


def cmd_compare(config):
    train = load_feature_csv(_require(config["train_path"], "training data (--train or train_path)"))
    test = load_feature_csv(_require(config["test_path"], "test data (--test or test_path)"), train.classes)
    out = _out_dir(config)
    rows = []
    for method in METHODS:
        sub = _out_dir({"out": out / method})
        try:
            start = time.perf_counter()
            model = _train_into(method, train, config, sub)
            report = _evaluate_into(model, test, sub, METHOD_TITLES[method])
            elapsed = time.perf_counter() - start
        except EnsembleError as exc:
            raise type(exc)(f"{method}: {exc}") from exc
        rows.append((METHOD_TITLES[method], report.accuracy, report.macro_avg.f1, elapsed))
    _write(out / "comparison.txt", comparison_text(rows))
    _write(out / "comparison.csv", comparison_csv(rows))
    _write(out / "comparison.svg", comparison_svg(rows))
    print(comparison_text(rows), end="")
    return rows


# ---------------------------------------------------------------- predict


def cmd_predict(config, model_path, input_path):
    model = load_model(_require(model_path, "model archive (--model)"))
    X = load_unlabeled_csv(_require(input_path, "input CSV (--input)"), model.n_features)
    out = _out_dir(config)
    names = [model.classes[i] for i in model.predict(X)]
    _write(out / "predictions.csv", "prediction\n" + "".join(f"{n}\n" for n in names))
    return names


# ---------------------------------------------------------------- entry point


LEAKAGE_HELP = "stacking: build meta-features from bases fit on the full training set"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. bagging.m=10 (repeatable)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="log progress (-vv for debug)")

    parser = argparse.ArgumentParser(prog="ensemblekit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", parents=[common], help="prepare train/val/test feature CSVs")
    p.add_argument("--data", help="feature CSV or image directory")
    p.add_argument("--format", choices=("csv", "images"))

    p = sub.add_parser("train", parents=[common], help="train one ensemble")
    p.add_argument("--train", help="training feature CSV")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--meta-leakage-mode", action="store_true", help=LEAKAGE_HELP)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate an archived model")
    p.add_argument("--model", help="model archive")
    p.add_argument("--test", help="labelled feature CSV")

    p = sub.add_parser("compare", parents=[common], help="train and evaluate all three methods")
    p.add_argument("--train", help="training feature CSV")
    p.add_argument("--test", help="test feature CSV")
    p.add_argument("--meta-leakage-mode", action="store_true", help=LEAKAGE_HELP)

    p = sub.add_parser("predict", parents=[common], help="predict labels for an unlabelled CSV")
    p.add_argument("--model", help="model archive")
    p.add_argument("--input", help="feature CSV without labels")
    return parser


def config_from_args(args):
    overrides = list(args.set)
    for flag, key in (("seed", "seed"), ("out", "out"), ("data", "data.path"), ("format", "data.format"),
                      ("train", "train_path"), ("test", "test_path"), ("method", "method")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides.append(f"{key}={json.dumps(value)}")
    if getattr(args, "meta_leakage_mode", False):
        overrides.append("stacking.meta_leakage_mode=true")
    return load_config(args.config, overrides)


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        if args.command == "split":
            cmd_split(config)
        elif args.command == "train":
            cmd_train(config)
        elif args.command == "evaluate":
            cmd_evaluate(config, args.model)
        elif args.command == "compare":
            cmd_compare(config)
        elif args.command == "predict":
            cmd_predict(config, args.model, args.input)
    except EnsembleError as exc:
        print(f"ensemblekit {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
