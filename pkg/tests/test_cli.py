import json

import numpy as np
import pytest

from ensemblekit.cli import main
from ensemblekit.config import DEFAULTS, load_config
from ensemblekit.data import Dataset, load_feature_csv, write_feature_csv
from ensemblekit.errors import ConfigError
from ensemblekit.imaging import Image, write_ppm
from ensemblekit.synthetic import three_blobs


@pytest.fixture(scope="module")
def split_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    train, test = three_blobs()
    full = Dataset(np.vstack([train.X, test.X]), np.concatenate([train.y, test.y]), train.classes)
    write_feature_csv(full, root / "all.csv")
    assert main(["split", "--data", str(root / "all.csv"), "--out", str(root / "split"), "--seed", "4"]) == 0
    return root


def test_split_outputs_and_manifest(split_dir):
    manifest = json.loads((split_dir / "split" / "manifest.json").read_text())
    assert manifest["totals"] == {"train": 630, "val": 135, "test": 135}
    assert manifest["counts"]["test"] == {"blob0": 45, "blob1": 45, "blob2": 45}
    for name in ("train", "val", "test"):
        assert load_feature_csv(split_dir / "split" / f"{name}.csv").d == 2


def test_split_rerun_byte_identical(split_dir, tmp_path):
    args = ["split", "--data", str(split_dir / "all.csv"), "--out", str(tmp_path / "again"), "--seed", "4"]
    assert main(args) == 0
    for name in ("train.csv", "val.csv", "test.csv", "manifest.json"):
        assert (tmp_path / "again" / name).read_bytes() == (split_dir / "split" / name).read_bytes()


def test_split_6000_rows_gives_900_test(tmp_path):
    y = np.repeat([0, 1, 2], 2000)
    ds = Dataset(np.arange(6000.0)[:, None], y, ("black_pod_rot", "healthy", "pod_borer"))
    write_feature_csv(ds, tmp_path / "big.csv")
    assert main(["split", "--data", str(tmp_path / "big.csv"), "--out", str(tmp_path / "o")]) == 0
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["totals"]["test"] == 900


def test_bad_fractions_fail_before_io(tmp_path):
    out = tmp_path / "never"
    code = main(["split", "--data", "missing.csv", "--out", str(out), "--set", "split.train=0.8"])
    assert code == 2 and not out.exists()


def test_missing_data_is_exit_3(tmp_path):
    assert main(["split", "--data", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")]) == 3


def test_split_images(tmp_path):
    rng = np.random.default_rng(0)
    for c, name in enumerate(("healthy", "black_pod_rot")):
        (tmp_path / "img" / name).mkdir(parents=True)
        for i in range(6):
            px = rng.integers(0, 64, (12, 10, 3), dtype=np.uint8) + 150 * c
            write_ppm(Image(px.astype(np.uint8)), tmp_path / "img" / name / f"{i}.ppm")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"data": {"format": "images", "size": [16, 16], "n_per_class": 9},
                               "split": {"train": 1 / 3, "val": 1 / 3, "test": 1 / 3}}))
    args = ["split", "--config", str(cfg), "--data", str(tmp_path / "img"), "--out", str(tmp_path / "o")]
    assert main(args) == 0
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["classes"] == ["black_pod_rot", "healthy"]
    # 3 per class per split, training doubled by augmentation
    assert manifest["totals"] == {"train": 12, "val": 6, "test": 6}
    assert manifest["augmented_train_samples"] == 6
    assert load_feature_csv(tmp_path / "o" / "train.csv").d == 24


@pytest.mark.parametrize("method", ["bagging", "boosting", "stacking"])
def test_train_evaluate_predict(split_dir, tmp_path, method, capsys):
    s = split_dir / "split"
    out = tmp_path / method
    assert main(["train", "--train", str(s / "train.csv"), "--method", method, "--out", str(out), "--seed", "2"]) == 0
    assert (out / "model.json").exists()
    log = (out / "train_log.csv").read_text().splitlines()
    if method == "boosting":
        assert log[0] == "round,eps,alpha"
        assert all(float(row.split(",")[1]) < 2 / 3 for row in log[1:])
    if method == "bagging":
        doc = json.loads((out / "model.json").read_text())
        assert len(doc["params"]["members"]) == 6 and len(log) == 7

    assert main(["evaluate", "--model", str(out / "model.json"), "--test", str(s / "test.csv"), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    doc = json.loads((out / "report.json").read_text())
    assert "accuracy" in printed and doc["accuracy"] > 0.9
    for f in ("report.txt", "confusion_matrix.csv", "confusion_matrix.svg"):
        assert (out / f).exists()

    assert main(["predict", "--model", str(out / "model.json"), "--input", str(s / "test.csv"), "--out", str(out)]) == 0
    preds = (out / "predictions.csv").read_text().splitlines()
    assert preds[0] == "prediction" and len(preds) == 136
    truth = load_feature_csv(s / "test.csv")
    acc = np.mean([p == truth.classes[t] for p, t in zip(preds[1:], truth.y)])
    assert acc == pytest.approx(doc["accuracy"])


def test_train_twice_identical_archive(split_dir, tmp_path):
    s = split_dir / "split"
    for name in ("a", "b"):
        assert main(["train", "--train", str(s / "train.csv"), "--method", "stacking",
                     "--out", str(tmp_path / name), "--meta-leakage-mode"]) == 0
    a = (tmp_path / "a" / "model.json").read_bytes()
    assert a == (tmp_path / "b" / "model.json").read_bytes()
    assert json.loads(a)["params"]["leakage"] is True


def test_memorizing_model_predicts_training_labels(tmp_path):
    X = np.array([[0.0], [1.0], [10.0], [11.0], [20.0], [21.0]])
    write_feature_csv(Dataset(X, [0, 0, 1, 1, 2, 2], ("a", "b", "c")), tmp_path / "t.csv")
    assert main(["train", "--train", str(tmp_path / "t.csv"), "--method", "boosting", "--out", str(tmp_path)]) == 0
    assert main(["predict", "--model", str(tmp_path / "model.json"), "--input", str(tmp_path / "t.csv"),
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "predictions.csv").read_text().split() == ["prediction", "a", "a", "b", "b", "c", "c"]


def test_evaluate_training_set_of_separable_benchmark(tmp_path):
    X = np.array([[0.0, 0.0], [0.5, 0.2], [10.0, 10.0], [10.5, 9.8]])
    write_feature_csv(Dataset(X, [0, 0, 1, 1], ("a", "b")), tmp_path / "t.csv")
    assert main(["train", "--train", str(tmp_path / "t.csv"), "--out", str(tmp_path)]) == 0
    assert main(["evaluate", "--model", str(tmp_path / "model.json"), "--test", str(tmp_path / "t.csv"),
                 "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "report.json").read_text())["accuracy"] == 1.0


def test_predict_single_row_and_dim_mismatch(split_dir, tmp_path, capsys):
    s = split_dir / "split"
    assert main(["train", "--train", str(s / "train.csv"), "--method", "boosting", "--out", str(tmp_path)]) == 0
    (tmp_path / "one.csv").write_text("f0,f1\n0.1,0.2\n")
    assert main(["predict", "--model", str(tmp_path / "model.json"), "--input", str(tmp_path / "one.csv"),
                 "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "predictions.csv").read_text().splitlines()) == 2
    (tmp_path / "three.csv").write_text("a,b,c\n1,2,3\n")
    assert main(["predict", "--model", str(tmp_path / "model.json"), "--input", str(tmp_path / "three.csv"),
                 "--out", str(tmp_path)]) == 3
    assert "expects d=2" in capsys.readouterr().err


def test_evaluate_empty_dataset_and_bad_archive(split_dir, tmp_path):
    s = split_dir / "split"
    assert main(["train", "--train", str(s / "train.csv"), "--method", "boosting", "--out", str(tmp_path)]) == 0
    (tmp_path / "empty.csv").write_text("f0,f1,label\n")
    assert main(["evaluate", "--model", str(tmp_path / "model.json"), "--test", str(tmp_path / "empty.csv"),
                 "--out", str(tmp_path)]) == 3
    doc = json.loads((tmp_path / "model.json").read_text())
    doc["format_version"] = 2
    (tmp_path / "model.json").write_text(json.dumps(doc))
    assert main(["evaluate", "--model", str(tmp_path / "model.json"), "--test", str(s / "test.csv"),
                 "--out", str(tmp_path)]) == 3


def test_compare_outputs(split_dir, tmp_path, capsys):
    s = split_dir / "split"
    assert main(["compare", "--train", str(s / "train.csv"), "--test", str(s / "test.csv"),
                 "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "comparison.csv").read_text().splitlines()
    assert rows[0] == "method,test_accuracy,macro_f1,wall_time_s"
    assert [r.split(",")[0] for r in rows[1:]] == ["Bagging", "Boosting", "Stacking"]
    assert (tmp_path / "comparison.svg").exists() and "Bagging" in capsys.readouterr().out


def test_compare_trivially_separable_all_perfect(tmp_path):
    rng = np.random.default_rng(1)
    centers = np.array([[0, 0], [20, 0], [10, 17]])
    X = np.vstack([rng.normal(c, 0.3, (30, 2)) for c in centers])
    y = np.repeat([0, 1, 2], 30)
    ds = Dataset(X, y, ("a", "b", "c"))
    write_feature_csv(ds, tmp_path / "d.csv")
    assert main(["compare", "--train", str(tmp_path / "d.csv"), "--test", str(tmp_path / "d.csv"),
                 "--out", str(tmp_path / "o")]) == 0
    accs = [float(r.split(",")[1]) for r in (tmp_path / "o" / "comparison.csv").read_text().splitlines()[1:]]
    assert accs == [1.0, 1.0, 1.0]


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bagging": {"m": 3}, "seed": 9}))
    config = load_config(cfg, ["bagging.m=4", "boosting.mode=binary"])
    assert config["bagging"]["m"] == 4 and config["seed"] == 9 and config["boosting"]["mode"] == "binary"
    assert DEFAULTS["bagging"]["m"] == 6
    for bad in (["nosuch=1"], ["bagging.m=0"], ["seed=-1"], ["stacking.meta.kind=\"stump\""], ["split.val"]):
        with pytest.raises(ConfigError):
            load_config(None, bad)
    cfg.write_text(json.dumps({"unknown": 1}))
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_missing_required_path_is_config_error(tmp_path):
    assert main(["train", "--out", str(tmp_path)]) == 2
