"""Spectra ingestion, rolling-window descriptor extraction, and screening.

A dataset is a samples-by-bins intensity matrix with binary labels
(case = 1, control = 0) and an optional vector of mass-to-charge values
for the bins.  Fixed-length windows slide along the bin axis; each
(sample, window) pair yields one scaling descriptor, giving a compact
feature matrix for classification.  Fisher's criterion ranks windows by
class separation and a Wilcoxon rank-sum screen verifies significance.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, EstimationError, IngestionError
from .estimators import METHODS, scaling_descriptor
from .utils import format_float, map_ordered, resolve_threads
from .wavelets import make_filter, wpd_full

LABEL_ALIASES = {"case": 1, "control": 0, "1": 1, "0": 0}


@dataclass(frozen=True)
class SpectraDataset:
    """Intensity matrix plus labels, ids, and optional m/z axis."""

    intensities: np.ndarray
    labels: np.ndarray
    sample_ids: tuple
    mz_values: np.ndarray = None

    def __post_init__(self):
        n, m = self.intensities.shape
        if len(self.labels) != n or len(self.sample_ids) != n:
            raise IngestionError("labels/ids do not match the intensity rows")
        if not np.isin(self.labels, (0, 1)).all():
            raise IngestionError("labels must be 0 (control) or 1 (case)")
        if self.mz_values is not None and len(self.mz_values) != m:
            raise IngestionError(
                f"m/z axis has {len(self.mz_values)} entries for {m} bins")

    @property
    def n_samples(self) -> int:
        return self.intensities.shape[0]

    @property
    def n_bins(self) -> int:
        return self.intensities.shape[1]


@dataclass(frozen=True)
class WindowGrid:
    """Rolling windows [start, end) over the bin axis."""

    window_len: int
    stride: int
    windows: tuple

    @property
    def count(self) -> int:
        return len(self.windows)


@dataclass(frozen=True)
class MethodConfig:
    """Decomposition settings for one estimator run.

    ``level_plan`` restricts the spectrum regression per window: a tuple
    of (first_window, last_window, levels) entries with 1-based inclusive
    window numbers.  Windows not covered by any entry use all decomposed
    levels.
    """

    family: str
    depth: int
    level_plan: tuple = ()

    def levels_for(self, window_number: int):
        for lo, hi, levels in self.level_plan:
            if lo <= window_number <= hi:
                return levels
        return None


# Window-group level plans for the two public ovarian SELDI-TOF datasets,
# stated in the package level convention (data level = 10 for 1024-point
# windows).  Plan level "L" rows below translate published per-window
# choices that count decomposition levels from the coarsest upward.
LEVEL_PLANS = {
    ("ovarian-4-3-02", "dwt"): ((1, 11, (6, 7, 8, 9)), (12, 29, (5, 6, 7, 8))),
    ("ovarian-8-7-02", "dwt"): ((1, 11, (7, 8, 9)), (12, 29, (6, 7, 8, 9))),
    ("ovarian-4-3-02", "wang"): ((1, 10, (6, 7, 8, 9)), (11, 29, (5, 6, 7, 8))),
    ("ovarian-8-7-02", "wang"): ((1, 15, (7, 8, 9)), (16, 29, (5, 6, 7, 8, 9))),
}


def default_method_config(method: str, dataset_tag: str = None) -> MethodConfig:
    """Per-method defaults: Haar at depth 10 for the spectrum methods,
    symmlet4 at depth 9 for the rank-size method (1024-point windows).

    ``dataset_tag`` selects a stored level plan, e.g. "ovarian-8-7-02".
    """
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}")
    plan = ()
    if dataset_tag is not None:
        try:
            plan = LEVEL_PLANS[(dataset_tag, method)]
        except KeyError:
            if method != "jones":
                raise ConfigurationError(
                    f"no stored level plan for ({dataset_tag!r}, {method!r})"
                ) from None
    if method == "jones":
        return MethodConfig(family="symmlet4", depth=9, level_plan=())
    return MethodConfig(family="haar", depth=10, level_plan=plan)


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-(sample, window) slopes with Hurst estimates kept alongside.

    ``slopes`` is the classifier input; ``hurst`` is derived per method
    and carried for reporting.
    """

    method: str
    slopes: np.ndarray
    hurst: np.ndarray
    labels: np.ndarray
    sample_ids: tuple
    grid: WindowGrid = None

    @property
    def n_windows(self) -> int:
        return self.slopes.shape[1]

    def write_csv(self, path) -> None:
        """Rows sample_id,label,w01..wW holding slope values."""
        width = max(2, len(str(self.n_windows)))
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["sample_id", "label"]
                       + [f"w{i + 1:0{width}d}" for i in range(self.n_windows)])
            for i, sid in enumerate(self.sample_ids):
                w.writerow([sid, int(self.labels[i])]
                           + [format_float(v) for v in self.slopes[i]])


def _read_rows(path) -> list:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc


def _parse_float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise IngestionError(f"non-numeric value {text!r} in {where}") from None


def load_labels(labels_path) -> dict:
    """Read a sample_id -> {0, 1} map from a two-column CSV."""
    rows = _read_rows(labels_path)
    if not rows:
        raise IngestionError(f"{labels_path}: empty labels file")
    header = [c.strip().lower() for c in rows[0]]
    if header[:2] != ["sample_id", "label"]:
        raise IngestionError(
            f"{labels_path}: expected header sample_id,label, got {rows[0]}")
    labels = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise IngestionError(f"{labels_path}: row {i} is not two columns")
        sid, raw = row[0].strip(), row[1].strip().lower()
        if raw not in LABEL_ALIASES:
            raise IngestionError(
                f"{labels_path}: sample {sid!r} has unknown label {row[1]!r}")
        if sid in labels:
            raise IngestionError(f"{labels_path}: duplicate sample id {sid!r}")
        labels[sid] = LABEL_ALIASES[raw]
    return labels


def _load_matrix_file(matrix_path):
    rows = _read_rows(matrix_path)
    if len(rows) < 2:
        raise IngestionError(f"{matrix_path}: need a header row and data rows")
    header = rows[0]
    ids = [c.strip() for c in header[1:]]
    if not ids:
        raise IngestionError(f"{matrix_path}: header lists no sample columns")
    width = len(header)
    mz = np.empty(len(rows) - 1)
    intens = np.empty((len(ids), len(rows) - 1))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise IngestionError(
                f"{matrix_path}: row {i} has {len(row)} columns, expected {width}")
        mz[i - 2] = _parse_float(row[0], f"{matrix_path} row {i}")
        for s in range(len(ids)):
            intens[s, i - 2] = _parse_float(
                row[s + 1], f"{matrix_path} row {i} column {s + 2}")
    return ids, mz, intens


def _load_sample_dir(dir_path):
    dir_path = Path(dir_path)
    manifest = dir_path / "manifest.csv"
    rows = _read_rows(manifest)
    if not rows or [c.strip().lower() for c in rows[0]][:2] != ["sample_id", "filename"]:
        raise IngestionError(
            f"{manifest}: expected header sample_id,filename")
    ids, files = [], []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise IngestionError(f"{manifest}: row {i} is not two columns")
        ids.append(row[0].strip())
        files.append(dir_path / row[1].strip())
    mz = None
    intens = None
    for s, fp in enumerate(files):
        body = _read_rows(fp)
        if not body:
            raise IngestionError(f"{fp}: empty file")
        start = 0
        try:
            float(body[0][0])
        except (ValueError, IndexError):
            start = 1  # header line
        data = body[start:]
        if intens is None:
            mz = np.empty(len(data))
            intens = np.empty((len(ids), len(data)))
        elif len(data) != intens.shape[1]:
            raise IngestionError(
                f"{fp}: {len(data)} bins, expected {intens.shape[1]} "
                f"(sample {ids[s]!r})")
        for i, row in enumerate(data):
            if len(row) != 2:
                raise IngestionError(f"{fp}: row {start + i + 1} is not two columns")
            v = _parse_float(row[0], f"{fp} row {start + i + 1}")
            if s == 0:
                mz[i] = v
            elif abs(v - mz[i]) > 1e-9 * max(1.0, abs(mz[i])):
                raise IngestionError(
                    f"{fp}: m/z grid differs from first sample at row "
                    f"{start + i + 1}")
            intens[s, i] = _parse_float(row[1], f"{fp} row {start + i + 1}")
    return ids, mz, intens


def load_dataset(matrix_path, labels_path) -> SpectraDataset:
    """Load intensities and labels from disk.

    ``matrix_path`` is either a single matrix CSV (header row of sample
    ids, first column m/z, remaining columns per-sample intensities) or a
    directory of two-column (m/z, intensity) CSVs listed by a
    ``manifest.csv`` with columns sample_id,filename.  ``labels_path`` is
    a CSV mapping sample_id to case/control (or 1/0).

    Ingestion problems raise IngestionError naming the offending record.
    """
    if Path(matrix_path).is_dir():
        ids, mz, intens = _load_sample_dir(matrix_path)
    else:
        ids, mz, intens = _load_matrix_file(matrix_path)
    seen = set()
    for sid in ids:
        if sid in seen:
            raise IngestionError(f"duplicate sample id {sid!r}")
        seen.add(sid)
    label_map = load_labels(labels_path)
    missing = [sid for sid in ids if sid not in label_map]
    if missing:
        raise IngestionError(f"labels file is missing ids: {missing}")
    labels = np.array([label_map[sid] for sid in ids], dtype=np.int8)
    return SpectraDataset(
        intensities=intens, labels=labels,
        sample_ids=tuple(ids), mz_values=mz)


def make_windows(n_bins: int, window_len: int = 1024, stride: int = 500) -> WindowGrid:
    """Rolling-window grid: window w covers [(w-1)*stride, ... + window_len).

    Produces floor((n_bins - window_len) / stride + 1) windows; bins past
    the last window are not covered.
    """
    if window_len < 1 or window_len > n_bins:
        raise ConfigurationError(
            f"window_len {window_len} does not fit {n_bins} bins")
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}")
    count = (n_bins - window_len) // stride + 1
    windows = tuple((w * stride, w * stride + window_len) for w in range(count))
    return WindowGrid(window_len=window_len, stride=stride, windows=windows)


def extract_features(dataset: SpectraDataset, method: str, grid: WindowGrid,
                     method_config: MethodConfig = None,
                     threads=None) -> FeatureMatrix:
    """Estimate one scaling descriptor per (sample, window).

    The window length must be a power of two compatible with the
    configured decomposition depth.  A failed estimate aborts the run
    (naming the sample and window) rather than leaving holes in the
    matrix.
    """
    if method not in METHODS:
        raise ConfigurationError(f"unknown method {method!r}")
    if method_config is None:
        method_config = default_method_config(method)
    wl = grid.window_len
    if wl & (wl - 1):
        raise ConfigurationError(
            f"window length {wl} is not a power of two")
    f = make_filter(method_config.family)
    threads = resolve_threads(threads)

    def one_sample(s):
        row = dataset.intensities[s]
        slopes = np.empty(grid.count)
        hurst = np.empty(grid.count)
        for w, (lo, hi) in enumerate(grid.windows):
            tree = wpd_full(row[lo:hi], f, method_config.depth)
            try:
                d = scaling_descriptor(method, tree,
                                       method_config.levels_for(w + 1))
            except EstimationError as exc:
                raise EstimationError(
                    f"estimate failed for sample {dataset.sample_ids[s]!r}, "
                    f"window {w + 1}: {exc}") from exc
            slopes[w] = d.slope
            hurst[w] = d.hurst
        return slopes, hurst

    results = map_ordered(one_sample, range(dataset.n_samples), threads=threads)
    slopes = np.vstack([r[0] for r in results])
    hurst = np.vstack([r[1] for r in results])
    return FeatureMatrix(method=method, slopes=slopes, hurst=hurst,
                         labels=dataset.labels.copy(),
                         sample_ids=dataset.sample_ids, grid=grid)


def _fisher_from_arrays(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    case = values[labels == 1]
    ctrl = values[labels == 0]
    if len(case) < 2 or len(ctrl) < 2:
        raise EstimationError(
            "Fisher scores need at least 2 samples in each class")
    num = (case.mean(axis=0) - ctrl.mean(axis=0)) ** 2
    den = case.var(axis=0, ddof=1) + ctrl.var(axis=0, ddof=1)
    scores = np.full(values.shape[1], np.inf)
    ok = den > 0.0
    scores[ok] = num[ok] / den[ok]
    zero_sep = (~ok) & (num == 0.0)
    scores[zero_sep] = 0.0
    if (~ok & ~zero_sep).any():
        warnings.warn("zero within-class variance; Fisher score set to inf",
                      RuntimeWarning, stacklevel=3)
    return scores


def fisher_scores(features: FeatureMatrix) -> np.ndarray:
    """Per-window class separation (mean gap squared over summed variance)."""
    return _fisher_from_arrays(features.slopes, features.labels)


def select_top(scores: np.ndarray, p: int) -> np.ndarray:
    """Indices of the p largest scores, best first; ties keep lower index."""
    scores = np.asarray(scores, dtype=float)
    w = len(scores)
    if not 1 <= p <= w:
        raise ConfigurationError(f"p must be in 1..{w}, got {p}")
    order = np.lexsort((np.arange(w), -scores))
    return order[:p]


def _normal_rank_sum(a: np.ndarray, b: np.ndarray):
    """Rank-sum statistic of ``a`` and its two-sided normal-approximation
    p-value with midrank tie correction and continuity correction."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = len(a), len(b)
    pooled = np.concatenate([a, b])
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    ranks[order] = np.arange(1, len(pooled) + 1)
    # midranks for ties
    sorted_vals = pooled[order]
    i = 0
    tie_sizes = []
    while i < len(sorted_vals):
        j = i
        while j + 1 < len(sorted_vals) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        if j > i:
            mid = (i + j) / 2.0 + 1.0
            ranks[order[i:j + 1]] = mid
            tie_sizes.append(j - i + 1)
        i = j + 1
    w_stat = float(ranks[:na].sum())
    n = na + nb
    mean = na * (n + 1) / 2.0
    tie_term = sum(t ** 3 - t for t in tie_sizes) / ((n) * (n - 1))
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    if var <= 0.0:
        return w_stat, 1.0
    diff = w_stat - mean
    cc = min(0.5, abs(diff))  # continuity correction toward the mean
    z = (abs(diff) - cc) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    return w_stat, min(1.0, p)


def rank_sum_test(a, b):
    """Wilcoxon rank-sum test, two-sided normal approximation.

    Returns (rank-sum statistic of ``a``, p-value).  Requires at least 5
    observations per sample for the approximation to be trustworthy.
    """
    if len(a) < 5 or len(b) < 5:
        raise EstimationError(
            "rank-sum test needs at least 5 observations per sample")
    return _normal_rank_sum(a, b)


def _balanced_row_indices(labels: np.ndarray, seed: int) -> np.ndarray:
    idx1 = np.flatnonzero(labels == 1)
    idx0 = np.flatnonzero(labels == 0)
    if len(idx0) == len(idx1):
        return np.arange(len(labels))
    rng = np.random.default_rng(seed)
    big, small = (idx1, idx0) if len(idx1) > len(idx0) else (idx0, idx1)
    kept = rng.choice(big, size=len(small), replace=False)
    return np.sort(np.concatenate([small, kept]))


def balance_classes(dataset: SpectraDataset, seed: int) -> SpectraDataset:
    """Subsample the larger class uniformly to match the smaller one.

    Row order of the kept samples is preserved; deterministic per seed.
    """
    keep = _balanced_row_indices(dataset.labels, seed)
    if len(keep) == dataset.n_samples:
        return dataset
    return SpectraDataset(
        intensities=dataset.intensities[keep],
        labels=dataset.labels[keep],
        sample_ids=tuple(dataset.sample_ids[i] for i in keep),
        mz_values=dataset.mz_values)


def balance_feature_rows(features: FeatureMatrix, seed: int) -> FeatureMatrix:
    """Class-balance an already-extracted feature matrix, as
    balance_classes does for raw spectra."""
    keep = _balanced_row_indices(features.labels, seed)
    if len(keep) == len(features.labels):
        return features
    return FeatureMatrix(
        method=features.method,
        slopes=features.slopes[keep],
        hurst=features.hurst[keep],
        labels=features.labels[keep],
        sample_ids=tuple(features.sample_ids[i] for i in keep),
        grid=features.grid)


def read_feature_csv(path) -> FeatureMatrix:
    """Load a feature CSV produced by FeatureMatrix.write_csv.

    The file stores slopes only, so the Hurst columns come back as NaN and
    the window grid is absent.
    """
    rows = _read_rows(path)
    if len(rows) < 2:
        raise IngestionError(f"{path}: need a header row and data rows")
    header = rows[0]
    if [c.strip().lower() for c in header[:2]] != ["sample_id", "label"]:
        raise IngestionError(
            f"{path}: expected header starting sample_id,label")
    n_windows = len(header) - 2
    if n_windows < 1:
        raise IngestionError(f"{path}: no feature columns")
    ids, labels = [], []
    slopes = np.empty((len(rows) - 1, n_windows))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise IngestionError(f"{path}: row {i} has {len(row)} columns, "
                                 f"expected {len(header)}")
        ids.append(row[0].strip())
        raw = row[1].strip().lower()
        if raw not in LABEL_ALIASES:
            raise IngestionError(
                f"{path}: sample {row[0]!r} has unknown label {row[1]!r}")
        labels.append(LABEL_ALIASES[raw])
        for w in range(n_windows):
            slopes[i - 2, w] = _parse_float(row[w + 2], f"{path} row {i}")
    return FeatureMatrix(
        method="unknown",
        slopes=slopes,
        hurst=np.full_like(slopes, np.nan),
        labels=np.array(labels, dtype=np.int8),
        sample_ids=tuple(ids))


def window_mz_ranges(grid: WindowGrid, mz_values) -> list:
    """Per window: (window number, first m/z, last m/z).

    With no m/z axis the m/z fields are None and only index ranges remain
    meaningful.  An unsorted axis raises IngestionError.
    """
    if mz_values is None:
        return [(w + 1, None, None) for w in range(grid.count)]
    mz = np.asarray(mz_values, dtype=float)
    if (np.diff(mz) < 0).any():
        raise IngestionError("m/z values must be sorted ascending")
    out = []
    for w, (lo, hi) in enumerate(grid.windows):
        out.append((w + 1, float(mz[lo]), float(mz[hi - 1])))
    return out


def write_window_metadata_csv(grid: WindowGrid, mz_values, path) -> None:
    """Sidecar CSV: window, 1-based inclusive bin indices, m/z range."""
    ranges = window_mz_ranges(grid, mz_values)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["window", "first_index", "last_index", "mz_lo", "mz_hi"])
        for (num, mz_lo, mz_hi), (lo, hi) in zip(ranges, grid.windows):
            w.writerow([num, lo + 1, hi,
                        "" if mz_lo is None else format_float(mz_lo),
                        "" if mz_hi is None else format_float(mz_hi)])


def write_screen_csv(features: FeatureMatrix, path) -> None:
    """Per-window rank-sum screen of case vs control slopes."""
    case = features.slopes[features.labels == 1]
    ctrl = features.slopes[features.labels == 0]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["window", "rank_sum_statistic", "p_value"])
        for i in range(features.n_windows):
            stat, p = rank_sum_test(case[:, i], ctrl[:, i])
            w.writerow([i + 1, format_float(stat), format_float(p)])
