import numpy as np
import pytest

from wavescale import two_class_fbm_dataset
from wavescale.cli import main, parse_float_range, parse_int_range
from wavescale.utils import resolve_threads


# ----------------------------------------------------------- flag parsing

def test_parse_float_range():
    assert parse_float_range("0.1..0.9") == pytest.approx(
        [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    assert parse_float_range("0.1..0.5:0.2") == pytest.approx([0.1, 0.3, 0.5])
    assert parse_float_range("0.3,0.7") == pytest.approx([0.3, 0.7])
    assert parse_float_range("0.5") == pytest.approx([0.5])


def test_parse_int_range():
    assert parse_int_range("1..5") == [1, 2, 3, 4, 5]
    assert parse_int_range("3,9") == [3, 9]
    assert parse_int_range("7") == [7]


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv("WAVESCALE_THREADS", "3")
    assert resolve_threads(None) == 3
    monkeypatch.delenv("WAVESCALE_THREADS")
    assert resolve_threads(None) == 1
    assert resolve_threads(5) == 5


# --------------------------------------------------------------- simulate

def test_simulate_writes_deterministic_csv(tmp_path):
    args = ["simulate", "--h", "0.5", "--reps", "8", "--n", "64",
            "--methods", "dwt,wang", "--seed", "7"]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "H,method,mean,std,n,failures"
    assert len(lines) == 3


def test_simulate_zero_reps_usage_error(tmp_path, capsys):
    rc = main(["simulate", "--h", "0.5", "--reps", "0", "--n", "64",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_console_script_installed():
    import shutil
    import subprocess
    exe = shutil.which("wavescale")
    if exe is None:
        pytest.skip("package not installed with console scripts")
    out = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip()


# ------------------------------------------------------- shared toy data

def _write_dataset(tmp_path, n_per_class=5, n_bins=1536, seed=3):
    ds = two_class_fbm_dataset(n_per_class=n_per_class, n_bins=n_bins,
                               seed=seed)
    lines = ["mz," + ",".join(ds.sample_ids)]
    for i in range(ds.n_bins):
        lines.append(",".join([repr(float(i + 1))] +
                              [repr(float(v)) for v in ds.intensities[:, i]]))
    matrix = tmp_path / "matrix.csv"
    matrix.write_text("\n".join(lines) + "\n", encoding="utf-8")
    labels = tmp_path / "labels.csv"
    labels.write_text(
        "sample_id,label\n" + "\n".join(
            f"{sid},{'case' if lab else 'control'}"
            for sid, lab in zip(ds.sample_ids, ds.labels)) + "\n",
        encoding="utf-8")
    return matrix, labels


# ---------------------------------------------------------------- extract

def test_extract_and_classify_round_trip(tmp_path):
    matrix, labels = _write_dataset(tmp_path)
    feats = tmp_path / "features.csv"
    rc = main(["extract", "--matrix", str(matrix), "--labels", str(labels),
               "--method", "wang", "--depth", "9",
               "--window-len", "512", "--stride", "512",
               "--out", str(feats)])
    assert rc == 0
    assert feats.exists()
    meta = tmp_path / "features_windows.csv"
    assert meta.exists()
    assert len(feats.read_text().splitlines()) == 11  # header + 10 samples

    out_dir = tmp_path / "cls"
    rc = main(["classify", "--features", str(feats), "--p", "2",
               "--repeats", "25", "--seed", "5", "--out-dir", str(out_dir),
               "--per-repeat-log"])
    assert rc == 0
    log = (out_dir / "per_repeat_logistic.csv").read_text().splitlines()
    assert log[0] == "repeat,test_accuracy,train_accuracy"
    assert len(log) == 26
    acc = (out_dir / "accuracy.csv").read_text().splitlines()
    assert acc[0].startswith("classifier,p,n_repeats")
    assert len(acc) == 3  # logistic + knn
    # separated synthetic classes (tiny sample; the real accuracy gate
    # lives in the acceptance suite)
    for line in acc[1:]:
        assert float(line.split(",")[4]) > 70.0
    assert (out_dir / "feature_correlation.csv").exists()
    assert (out_dir / "selected_features.csv").exists()


def test_extract_jones_defaults(tmp_path):
    # --method jones implies symmlet4 at depth 9 without extra flags
    matrix, labels = _write_dataset(tmp_path, n_per_class=2, n_bins=1024)
    feats = tmp_path / "j.csv"
    rc = main(["extract", "--matrix", str(matrix), "--labels", str(labels),
               "--method", "jones", "--out", str(feats)])
    assert rc == 0
    lines = feats.read_text().splitlines()
    assert lines[0] == "sample_id,label,w01"
    assert len(lines) == 5


def test_extract_missing_labels_file_exit_3(tmp_path, capsys):
    matrix, _ = _write_dataset(tmp_path, n_per_class=2)
    rc = main(["extract", "--matrix", str(matrix),
               "--labels", str(tmp_path / "nope.csv"),
               "--method", "dwt", "--depth", "9",
               "--window-len", "512", "--stride", "512",
               "--out", str(tmp_path / "f.csv")])
    assert rc == 3
    assert "error" in capsys.readouterr().err


def test_extract_estimation_failure_exit_4(tmp_path):
    matrix = tmp_path / "flat.csv"
    matrix.write_text(
        "mz,s1,s2\n" + "\n".join(f"{i}.0,1.0,1.0" for i in range(512)) + "\n",
        encoding="utf-8")
    labels = tmp_path / "labels.csv"
    labels.write_text("sample_id,label\ns1,case\ns2,control\n",
                      encoding="utf-8")
    with pytest.warns(RuntimeWarning):
        rc = main(["extract", "--matrix", str(matrix), "--labels",
                   str(labels), "--method", "dwt", "--depth", "8",
                   "--window-len", "512", "--stride", "512",
                   "--out", str(tmp_path / "f.csv")])
    assert rc == 4


# --------------------------------------------------------------- pipeline

def _write_config(tmp_path, matrix, labels, out_dir, extra=""):
    cfg = tmp_path / "run.yaml"
    cfg.write_text(f"""\
# toy end-to-end run
dataset:
  matrix: {matrix}
  labels: {labels}
method: wang
depth: 9
window:
  length: 512
  stride: 512
balance: false
classifiers:
  - kind: logistic
    C: 1.0
  - kind: knn
    k: 5
split:
  repeats: 20
features:
  p: 2
  curve: [1, 3]
  curve_repeats: 10
seed: 11
output_dir: {out_dir}
{extra}""", encoding="utf-8")
    return cfg


def test_pipeline_end_to_end_and_idempotent(tmp_path):
    matrix, labels = _write_dataset(tmp_path, n_per_class=5)
    out_dir = tmp_path / "out"
    cfg = _write_config(tmp_path, matrix, labels, out_dir)
    assert main(["pipeline", str(cfg)]) == 0
    expected = ["features.csv", "windows.csv", "rank_sum_screen.csv",
                "accuracy.csv", "feature_correlation.csv",
                "selected_features.csv", "accuracy_vs_features_logistic.csv",
                "accuracy_vs_features_knn.csv"]
    for name in expected:
        assert (out_dir / name).exists(), name
    first = (out_dir / "features.csv").read_bytes()
    acc_first = (out_dir / "accuracy.csv").read_bytes()
    assert main(["pipeline", str(cfg)]) == 0
    assert (out_dir / "features.csv").read_bytes() == first
    assert (out_dir / "accuracy.csv").read_bytes() == acc_first
    curve = (out_dir / "accuracy_vs_features_knn.csv").read_text().splitlines()
    assert len(curve) == 4  # header + p in 1..3


def test_pipeline_failure_removes_partial_outputs(tmp_path):
    matrix, labels = _write_dataset(tmp_path, n_per_class=5)
    out_dir = tmp_path / "out"
    # p larger than the window count fails after features.csv is written
    cfg = _write_config(tmp_path, matrix, labels, out_dir,
                        extra="").read_text()
    cfg = cfg.replace("p: 2", "p: 25")
    bad = tmp_path / "bad_p.yaml"
    bad.write_text(cfg, encoding="utf-8")
    assert main(["pipeline", str(bad)]) == 2
    assert not (out_dir / "features.csv").exists()
    assert not (out_dir / "rank_sum_screen.csv").exists()


def test_pipeline_config_missing_method_exit_2(tmp_path, capsys):
    matrix, labels = _write_dataset(tmp_path, n_per_class=2)
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(f"dataset:\n  matrix: {matrix}\n  labels: {labels}\n",
                   encoding="utf-8")
    assert main(["pipeline", str(cfg)]) == 2
    assert "method" in capsys.readouterr().err


def test_pipeline_config_missing_path_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("dataset:\n  matrix: missing.csv\n  labels: also.csv\n"
                   "method: dwt\n", encoding="utf-8")
    assert main(["pipeline", str(cfg)]) == 2
    assert "exist" in capsys.readouterr().err
