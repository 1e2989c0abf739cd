"""Repeated random-split evaluation of simple classifiers.

Two classifiers are implemented from first principles: an L2-regularized
logistic regression fitted by deterministic gradient descent with a
backtracking line search, and a majority-vote k-nearest-neighbors rule.
The evaluation loop draws seeded train/test splits, ranks features by
Fisher score on the training rows only (unless the global compatibility
mode is requested), standardizes with training statistics, and aggregates
test accuracy across repeats.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, EstimationError
from .pipeline import FeatureMatrix, _fisher_from_arrays, select_top
from .utils import format_float, map_ordered, resolve_threads

SELECTION_MODES = ("per-split", "global")


@dataclass(frozen=True)
class SplitSpec:
    """Repeated-holdout parameters."""

    train_fraction: float = 0.67
    n_repeats: int = 10_000
    master_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.n_repeats < 1:
            raise ConfigurationError(
                f"n_repeats must be >= 1, got {self.n_repeats}")


@dataclass(frozen=True)
class ClassifierSpec:
    """Classifier choice plus hyperparameters.

    ``kind`` is "logistic" (l2_c is the inverse regularization strength)
    or "knn" (k neighbors, equal weights, Euclidean distance).
    """

    kind: str = "logistic"
    l2_c: float = 1.0
    max_iters: int = 500
    tol: float = 1e-6
    k: int = 5

    def __post_init__(self):
        if self.kind not in ("logistic", "knn"):
            raise ConfigurationError(f"unknown classifier kind {self.kind!r}")
        if self.kind == "logistic" and self.l2_c <= 0:
            raise ConfigurationError("l2_c must be positive")
        if self.kind == "knn" and self.k < 1:
            raise ConfigurationError("k must be >= 1")

    def describe(self) -> str:
        if self.kind == "logistic":
            return f"logistic(C={self.l2_c:g})"
        return f"knn(k={self.k})"


@dataclass(frozen=True)
class StandardizeTransform:
    """Per-feature affine map fitted on training rows."""

    mean: np.ndarray
    scale: np.ndarray
    degenerate: np.ndarray  # features whose training std was zero

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) / self.scale


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    bias: float
    converged: bool
    n_iters: int


@dataclass(frozen=True)
class EvalReport:
    """Accuracy aggregates over repeated splits, in percent."""

    classifier: str
    p: int
    n_repeats: int
    mean_test_accuracy: float
    std_test_accuracy: float
    mean_train_accuracy: float
    std_train_accuracy: float
    redraws: int
    selection_mode: str
    per_repeat: tuple = field(default=None, repr=False)


def standardize(train_x: np.ndarray, test_x: np.ndarray):
    """Center and scale by training statistics; apply unchanged to test.

    Features with zero training standard deviation are centered only and
    reported through the transform's ``degenerate`` mask.
    """
    train_x = np.asarray(train_x, dtype=float)
    test_x = np.asarray(test_x, dtype=float)
    if train_x.shape[0] < 2:
        raise EstimationError("standardization needs at least 2 training rows")
    mean = train_x.mean(axis=0)
    std = train_x.std(axis=0, ddof=0)
    degenerate = std == 0.0
    if degenerate.any():
        warnings.warn("zero training std; feature centered only",
                      RuntimeWarning, stacklevel=2)
    scale = np.where(degenerate, 1.0, std)
    t = StandardizeTransform(mean=mean, scale=scale, degenerate=degenerate)
    return t.apply(train_x), t.apply(test_x), t


def logistic_objective(weights, bias, x, y, l2_c) -> float:
    """Mean negative log-likelihood plus ||w||^2 / (2 * C * n)."""
    s = x @ weights + bias
    nll = np.mean(np.logaddexp(0.0, s) - y * s)
    return float(nll + np.dot(weights, weights) / (2.0 * l2_c * len(y)))


def logistic_gradient(weights, bias, x, y, l2_c):
    """Analytic gradient of logistic_objective in (weights, bias)."""
    n = len(y)
    p = _sigmoid(x @ weights + bias)
    resid = p - y
    gw = x.T @ resid / n + weights / (l2_c * n)
    gb = float(resid.mean())
    return gw, gb


def _sigmoid(s: np.ndarray) -> np.ndarray:
    out = np.empty_like(s, dtype=float)
    pos = s >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-s[pos]))
    es = np.exp(s[~pos])
    out[~pos] = es / (1.0 + es)
    return out


def train_logistic(x: np.ndarray, y: np.ndarray, l2_c: float = 1.0,
                   max_iters: int = 500, tol: float = 1e-6) -> LogisticModel:
    """Fit by gradient descent with an Armijo backtracking line search.

    Deterministic: starts from zero weights, halves the step until the
    sufficient-decrease test passes, and stops once the gradient norm
    falls below ``tol``.  Non-convergence within ``max_iters`` returns the
    last iterate with ``converged`` False and a warning.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.zeros(x.shape[1])
    b = 0.0
    obj = logistic_objective(w, b, x, y, l2_c)
    step = 1.0
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        gw, gb = logistic_gradient(w, b, x, y, l2_c)
        gnorm2 = float(np.dot(gw, gw) + gb * gb)
        if np.sqrt(gnorm2) < tol:
            converged = True
            it -= 1
            break
        step = min(step * 2.0, 1e6)
        for _ in range(60):
            w_new = w - step * gw
            b_new = b - step * gb
            obj_new = logistic_objective(w_new, b_new, x, y, l2_c)
            if obj_new <= obj - 0.5 * step * gnorm2:
                break
            step *= 0.5
        w, b, obj = w_new, b_new, obj_new
    else:
        gw, gb = logistic_gradient(w, b, x, y, l2_c)
        converged = np.sqrt(np.dot(gw, gw) + gb * gb) < tol
    if not converged:
        warnings.warn(f"logistic fit did not converge in {max_iters} "
                      "iterations", RuntimeWarning, stacklevel=2)
    return LogisticModel(weights=w, bias=float(b),
                         converged=converged, n_iters=it)


def predict_logistic(model: LogisticModel, x: np.ndarray):
    """Probabilities via the sigmoid score, labels thresholded at 0.5."""
    probs = _sigmoid(np.asarray(x, dtype=float) @ model.weights + model.bias)
    return (probs > 0.5).astype(np.int8), probs


def knn_predict(train_x: np.ndarray, train_y: np.ndarray,
                test_x: np.ndarray, k: int = 5) -> np.ndarray:
    """Majority vote among the k Euclidean-nearest training rows.

    Distance ties resolve toward the lower training-row index; an even
    vote split resolves to label 0.
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    train_x = np.asarray(train_x, dtype=float)
    test_x = np.asarray(test_x, dtype=float)
    if k > train_x.shape[0]:
        raise ConfigurationError(
            f"k={k} exceeds {train_x.shape[0]} training rows")
    d2 = ((test_x[:, None, :] - train_x[None, :, :]) ** 2).sum(axis=2)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
    votes = np.asarray(train_y)[nearest].sum(axis=1)
    return (votes * 2 > k).astype(np.int8)


def _accuracy(pred: np.ndarray, truth: np.ndarray) -> float:
    return float(np.mean(pred == truth))


def _run_split(slopes, labels, train_idx, test_idx, spec: ClassifierSpec,
               p: int, apply_standardize: bool, global_selection=None):
    """Train and score one split; selection sees training labels only."""
    y_train = labels[train_idx]
    if global_selection is None:
        scores = _fisher_from_arrays(slopes[train_idx], y_train)
        selected = select_top(scores, p)
    else:
        selected = global_selection
    x_train = slopes[np.ix_(train_idx, selected)]
    x_test = slopes[np.ix_(test_idx, selected)]
    if apply_standardize:
        x_train, x_test, _ = standardize(x_train, x_test)
    y_test = labels[test_idx]
    if spec.kind == "logistic":
        model = train_logistic(x_train, y_train, l2_c=spec.l2_c,
                               max_iters=spec.max_iters, tol=spec.tol)
        pred_train, _ = predict_logistic(model, x_train)
        pred_test, _ = predict_logistic(model, x_test)
    else:
        pred_train = knn_predict(x_train, y_train, x_train, k=spec.k)
        pred_test = knn_predict(x_train, y_train, x_test, k=spec.k)
    return (_accuracy(pred_test, y_test), _accuracy(pred_train, y_train),
            selected)


def evaluate(features: FeatureMatrix, classifier_spec: ClassifierSpec,
             p: int, split: SplitSpec, apply_standardize: bool = True,
             selection_mode: str = "per-split", keep_per_repeat: bool = False,
             threads=None) -> EvalReport:
    """Mean test accuracy over seeded repeated holdout splits.

    Each repeat draws a uniform train subset of round(train_fraction * n)
    rows, ranks windows by Fisher score on the training rows, keeps the
    top ``p``, standardizes, trains, and scores the held-out rows.  A
    repeat whose training half lacks a class is redrawn (and counted).

    ``selection_mode`` "global" instead ranks once on the full matrix
    before splitting, reproducing pipelines that select features ahead of
    the split at the cost of information leaking into the test score.

    Per-repeat seeds spawn from the split's master seed, so reports are
    identical for any thread count.
    """
    if selection_mode not in SELECTION_MODES:
        raise ConfigurationError(
            f"selection_mode must be one of {SELECTION_MODES}")
    n = len(features.labels)
    if not 1 <= p <= features.n_windows:
        raise ConfigurationError(
            f"p must be in 1..{features.n_windows}, got {p}")
    n_train = int(round(split.train_fraction * n))
    n_train = min(max(n_train, 1), n - 1)
    labels = features.labels.astype(np.int8)
    slopes = features.slopes
    threads = resolve_threads(threads)

    global_selection = None
    if selection_mode == "global":
        global_selection = select_top(_fisher_from_arrays(slopes, labels), p)

    def one_repeat(rep):
        rng = np.random.default_rng(
            np.random.SeedSequence(split.master_seed, spawn_key=(rep,)))
        redraws = 0
        while True:
            perm = rng.permutation(n)
            train_idx, test_idx = perm[:n_train], perm[n_train:]
            ones = int(labels[train_idx].sum())
            # Fisher ranking needs two samples of each class in training
            if 2 <= ones <= n_train - 2:
                break
            redraws += 1
            if redraws > 1000:
                raise EstimationError(
                    "could not draw a training split with two samples "
                    "per class")
        test_acc, train_acc, _ = _run_split(
            slopes, labels, train_idx, test_idx, classifier_spec, p,
            apply_standardize, global_selection)
        return test_acc, train_acc, redraws

    rows = map_ordered(one_repeat, range(split.n_repeats), threads=threads)
    test_acc = np.array([r[0] for r in rows]) * 100.0
    train_acc = np.array([r[1] for r in rows]) * 100.0
    redraws = sum(r[2] for r in rows)
    return EvalReport(
        classifier=classifier_spec.describe(),
        p=p,
        n_repeats=split.n_repeats,
        mean_test_accuracy=float(test_acc.mean()),
        std_test_accuracy=float(test_acc.std(ddof=1)) if len(test_acc) > 1 else 0.0,
        mean_train_accuracy=float(train_acc.mean()),
        std_train_accuracy=float(train_acc.std(ddof=1)) if len(train_acc) > 1 else 0.0,
        redraws=redraws,
        selection_mode=selection_mode,
        per_repeat=tuple(zip(test_acc, train_acc)) if keep_per_repeat else None,
    )


def accuracy_vs_feature_count(features: FeatureMatrix,
                              classifier_spec: ClassifierSpec,
                              p_range=None, split: SplitSpec = None,
                              apply_standardize: bool = True,
                              selection_mode: str = "per-split",
                              threads=None) -> list:
    """Evaluate across feature counts; returns one EvalReport per p.

    ``p_range`` defaults to 1..W and ``split`` to 1,000 repeats, giving
    train and test accuracy curves against the number of kept features.
    """
    if p_range is None:
        p_range = range(1, features.n_windows + 1)
    if split is None:
        split = SplitSpec(n_repeats=1000)
    return [evaluate(features, classifier_spec, p, split,
                     apply_standardize=apply_standardize,
                     selection_mode=selection_mode, threads=threads)
            for p in p_range]


def feature_correlation(features: FeatureMatrix, selected=None) -> np.ndarray:
    """Pearson correlation matrix of the selected feature columns.

    Zero-variance columns yield NaN rows/columns (reported missing).
    """
    x = features.slopes if selected is None else features.slopes[:, selected]
    if x.shape[0] < 2:
        raise EstimationError("correlation needs at least 2 samples")
    std = x.std(axis=0, ddof=0)
    dead = std == 0.0
    if dead.any():
        warnings.warn("zero-variance feature; correlation undefined",
                      RuntimeWarning, stacklevel=2)
    centered = x - x.mean(axis=0)
    denom = np.where(dead, 1.0, std)
    z = centered / denom
    corr = z.T @ z / x.shape[0]
    corr[dead, :] = np.nan
    corr[:, dead] = np.nan
    valid = ~dead
    corr[np.ix_(valid, valid)] = np.clip(corr[np.ix_(valid, valid)], -1.0, 1.0)
    np.fill_diagonal(corr, np.where(dead, np.nan, 1.0))
    return corr


def write_eval_csv(reports, path) -> None:
    """One row per (classifier, p): accuracy aggregates in percent."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["classifier", "p", "n_repeats", "selection_mode",
                    "mean_test_accuracy", "std_test_accuracy",
                    "mean_train_accuracy", "std_train_accuracy", "redraws"])
        for r in reports:
            w.writerow([r.classifier, r.p, r.n_repeats, r.selection_mode,
                        format_float(r.mean_test_accuracy),
                        format_float(r.std_test_accuracy),
                        format_float(r.mean_train_accuracy),
                        format_float(r.std_train_accuracy), r.redraws])


def write_per_repeat_csv(report: EvalReport, path) -> None:
    """Optional per-repeat log: repeat, test and train accuracy."""
    if report.per_repeat is None:
        raise ConfigurationError("report was built without per-repeat records")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["repeat", "test_accuracy", "train_accuracy"])
        for i, (te, tr) in enumerate(report.per_repeat):
            w.writerow([i, format_float(te), format_float(tr)])


def write_correlation_csv(corr: np.ndarray, selected, path) -> None:
    """Correlation matrix CSV labeled by 1-based window numbers."""
    names = [f"w{int(i) + 1}" for i in selected]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([""] + names)
        for name, row in zip(names, corr):
            w.writerow([name] + ["" if np.isnan(v) else format_float(v)
                                 for v in row])
