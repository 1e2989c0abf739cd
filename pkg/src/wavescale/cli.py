"""Command-line surface: simulate, extract, classify, pipeline.

Every command is deterministic given its seed flags and emits CSV files
only (plot-ready data, no graphics).  Exit codes: 0 success, 2 usage or
configuration problem, 3 ingestion problem, 4 estimation or convergence
problem.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import (
    SplitSpec,
    accuracy_vs_feature_count,
    evaluate,
    feature_correlation,
    write_correlation_csv,
    write_eval_csv,
    write_per_repeat_csv,
)
from .config import RunConfig, load_run_config
from .errors import ConfigurationError, EstimationError, IngestionError, ShapeError
from .estimators import METHODS
from .fbm import run_estimator_benchmark
from .pipeline import (
    FeatureMatrix,
    MethodConfig,
    balance_classes,
    balance_feature_rows,
    default_method_config,
    extract_features,
    fisher_scores,
    load_dataset,
    make_windows,
    read_feature_csv,
    select_top,
    write_screen_csv,
    write_window_metadata_csv,
)
from .utils import format_float, resolve_threads


def parse_float_range(text: str, default_step: float = 0.1):
    """Grid syntax: "0.3", "0.1,0.5,0.9", "0.1..0.9" or "0.1..0.9:0.2"."""
    text = text.strip()
    if ".." in text:
        span, _, step = text.partition(":")
        lo_s, _, hi_s = span.partition("..")
        try:
            lo, hi = float(lo_s), float(hi_s)
            step_v = float(step) if step else default_step
        except ValueError:
            raise ConfigurationError(f"bad range {text!r}") from None
        if step_v <= 0 or hi < lo:
            raise ConfigurationError(f"bad range {text!r}")
        count = int(round((hi - lo) / step_v)) + 1
        vals = [round(lo + i * step_v, 12) for i in range(count)]
        return [v for v in vals if v <= hi + 1e-12]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"bad value list {text!r}") from None


def parse_int_range(text: str):
    """Grid syntax: "10", "1,5,10" or "1..29"."""
    text = text.strip()
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise ConfigurationError(f"bad range {text!r}") from None
        if hi < lo:
            raise ConfigurationError(f"bad range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"bad value list {text!r}") from None


def _add_threads(p: argparse.ArgumentParser):
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: WAVESCALE_THREADS or 1)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wavescale",
        description="Wavelet-packet scaling descriptors and the windowed "
                    "classification pipeline")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate",
                         help="benchmark the Hurst estimators on simulated fBm")
    sim.add_argument("--h", default="0.1..0.9",
                     help="Hurst grid, e.g. 0.1..0.9 or 0.3,0.5 (default 0.1..0.9)")
    sim.add_argument("--reps", type=int, default=1000)
    sim.add_argument("--n", type=int, default=1024, help="signal length")
    sim.add_argument("--methods", default="dwt,wang,jones")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default="hurst_benchmark.csv")
    _add_threads(sim)

    ext = sub.add_parser("extract", help="rolling-window feature extraction")
    ext.add_argument("--matrix", required=True,
                     help="matrix CSV or per-sample directory")
    ext.add_argument("--labels", required=True, help="labels CSV")
    ext.add_argument("--method", required=True, choices=METHODS)
    ext.add_argument("--wavelet", default=None)
    ext.add_argument("--depth", type=int, default=None)
    ext.add_argument("--window-len", type=int, default=1024)
    ext.add_argument("--stride", type=int, default=500)
    ext.add_argument("--dataset-tag", default=None,
                     help="named level plan, e.g. ovarian-8-7-02")
    ext.add_argument("--out", default="features.csv")
    ext.add_argument("--meta", default=None,
                     help="window metadata CSV (default: <out>_windows.csv)")
    _add_threads(ext)

    cls = sub.add_parser("classify",
                         help="repeated-split evaluation of a feature matrix")
    cls.add_argument("--features", required=True, help="feature CSV from extract")
    cls.add_argument("--p", type=int, default=10)
    cls.add_argument("--repeats", type=int, default=10_000)
    cls.add_argument("--classifiers", default="logistic,knn")
    cls.add_argument("--train-fraction", type=float, default=0.67)
    cls.add_argument("--curve", default=None,
                     help="feature-count sweep, e.g. 1..29")
    cls.add_argument("--curve-repeats", type=int, default=1000)
    cls.add_argument("--balance", action="store_true",
                     help="subsample the larger class first")
    cls.add_argument("--standardize", dest="standardize",
                     action=argparse.BooleanOptionalAction, default=True)
    cls.add_argument("--selection", choices=("per-split", "global"),
                     default="per-split")
    cls.add_argument("--per-repeat-log", action="store_true")
    cls.add_argument("--seed", type=int, default=0)
    cls.add_argument("--out-dir", default=".")
    _add_threads(cls)

    pipe = sub.add_parser("pipeline", help="full run from a YAML config")
    pipe.add_argument("config", help="path to the YAML run configuration")
    return ap


def _parse_classifier_names(text: str):
    from .classify import ClassifierSpec
    specs = []
    for name in text.split(","):
        name = name.strip()
        if not name:
            continue
        specs.append(ClassifierSpec(kind=name))
    if not specs:
        raise ConfigurationError("no classifiers requested")
    return specs


def cmd_simulate(args) -> int:
    h_grid = parse_float_range(args.h)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    report = run_estimator_benchmark(
        h_grid, n_reps=args.reps, length=args.n, methods=methods,
        master_seed=args.seed, threads=args.threads)
    report.write_csv(args.out)
    print(f"wrote {args.out} ({len(report.entries)} cells)")
    return 0


def _method_config_from_args(args) -> MethodConfig:
    base = default_method_config(args.method, args.dataset_tag)
    return MethodConfig(
        family=args.wavelet or base.family,
        depth=args.depth if args.depth is not None else base.depth,
        level_plan=base.level_plan)


def cmd_extract(args) -> int:
    dataset = load_dataset(args.matrix, args.labels)
    grid = make_windows(dataset.n_bins, args.window_len, args.stride)
    features = extract_features(dataset, args.method, grid,
                                _method_config_from_args(args),
                                threads=args.threads)
    features.write_csv(args.out)
    meta = args.meta or str(Path(args.out).with_suffix("")) + "_windows.csv"
    write_window_metadata_csv(grid, dataset.mz_values, meta)
    print(f"wrote {args.out} ({features.slopes.shape[0]} samples x "
          f"{features.n_windows} windows) and {meta}")
    return 0


def _classify_feature_matrix(features: FeatureMatrix, classifiers, p,
                             split: SplitSpec, curve, curve_repeats,
                             standardize_flag, selection_mode, out_dir: Path,
                             threads, per_repeat_log=False,
                             written=None) -> list:
    out_dir.mkdir(parents=True, exist_ok=True)
    # caller may pass its own list to track partial outputs for cleanup
    written = [] if written is None else written
    reports = []
    for spec in classifiers:
        rep = evaluate(features, spec, p, split,
                       apply_standardize=standardize_flag,
                       selection_mode=selection_mode,
                       keep_per_repeat=per_repeat_log, threads=threads)
        reports.append(rep)
        if per_repeat_log:
            path = out_dir / f"per_repeat_{spec.kind}.csv"
            write_per_repeat_csv(rep, path)
            written.append(path)
    path = out_dir / "accuracy.csv"
    write_eval_csv(reports, path)
    written.append(path)

    if curve is not None:
        lo, hi = curve
        curve_split = SplitSpec(train_fraction=split.train_fraction,
                                n_repeats=curve_repeats,
                                master_seed=split.master_seed)
        for spec in classifiers:
            curve_reports = accuracy_vs_feature_count(
                features, spec, range(lo, hi + 1), curve_split,
                apply_standardize=standardize_flag,
                selection_mode=selection_mode, threads=threads)
            path = out_dir / f"accuracy_vs_features_{spec.kind}.csv"
            write_eval_csv(curve_reports, path)
            written.append(path)

    selected = select_top(fisher_scores(features), p)
    corr = feature_correlation(features, selected)
    path = out_dir / "feature_correlation.csv"
    write_correlation_csv(corr, selected, path)
    written.append(path)

    sel_path = out_dir / "selected_features.csv"
    _write_selected_features(features, selected, sel_path)
    written.append(sel_path)
    return written


def _write_selected_features(features: FeatureMatrix, selected, path):
    """Top-p slope columns for external classifiers."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_id", "label"]
                   + [f"w{int(i) + 1}" for i in selected])
        for row_i, sid in enumerate(features.sample_ids):
            w.writerow([sid, int(features.labels[row_i])]
                       + [format_float(v)
                          for v in features.slopes[row_i, selected]])


def cmd_classify(args) -> int:
    features = read_feature_csv(args.features)
    if args.balance:
        features = balance_feature_rows(features, args.seed)
    split = SplitSpec(train_fraction=args.train_fraction,
                      n_repeats=args.repeats, master_seed=args.seed)
    curve = None
    if args.curve is not None:
        vals = parse_int_range(args.curve)
        curve = (min(vals), max(vals))
    written = _classify_feature_matrix(
        features, _parse_classifier_names(args.classifiers), args.p, split,
        curve, args.curve_repeats, args.standardize, args.selection,
        Path(args.out_dir), args.threads, per_repeat_log=args.per_repeat_log)
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


def cmd_pipeline(args) -> int:
    cfg: RunConfig = load_run_config(args.config)
    out_dir = cfg.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        dataset = load_dataset(cfg.matrix_path, cfg.labels_path)
        if cfg.balance:
            dataset = balance_classes(dataset, cfg.seed)
        grid = make_windows(dataset.n_bins, cfg.window_len, cfg.stride)
        features = extract_features(dataset, cfg.method, grid,
                                    cfg.method_config, threads=cfg.threads)
        path = out_dir / "features.csv"
        features.write_csv(path)
        written.append(path)
        path = out_dir / "windows.csv"
        write_window_metadata_csv(grid, dataset.mz_values, path)
        written.append(path)
        path = out_dir / "rank_sum_screen.csv"
        write_screen_csv(features, path)
        written.append(path)
        _classify_feature_matrix(
            features, cfg.classifiers, cfg.p, cfg.split, cfg.curve,
            cfg.curve_repeats, cfg.standardize, cfg.selection_mode, out_dir,
            cfg.threads, per_repeat_log=cfg.per_repeat_log, written=written)
    except Exception:
        for p in written:
            try:
                Path(p).unlink()
            except OSError:
                pass
        raise
    print("pipeline complete; wrote " + ", ".join(str(p) for p in written))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    np.seterr(over="ignore")
    handlers = {
        "simulate": cmd_simulate,
        "extract": cmd_extract,
        "classify": cmd_classify,
        "pipeline": cmd_pipeline,
    }
    try:
        if getattr(args, "threads", None) is not None:
            resolve_threads(args.threads)  # validate early
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (EstimationError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
