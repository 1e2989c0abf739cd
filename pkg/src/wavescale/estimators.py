"""Slope and Hurst-exponent estimators on wavelet packet decompositions.

Three methods share the machinery here:

* ``dwt``   - log2 level energies of the pyramid detail nodes (the (j, 1)
  packet nodes); the fitted slope s maps to H = -(s + 1) / 2.
* ``wang``  - log2 level energies averaged over every detail node of a
  level; the slope s maps to H = -s / 2.
* ``jones`` - rank-size fit of the entropy-best-basis coefficients: sort
  absolute coefficients in descending order, regress ln(value) on
  ln(rank), and map the slope d to H = |d + 1|.

Level energies are mean squared coefficients, so all slopes are invariant
under positive rescaling of the input signal.  For paths with H inside
(0, 1) the dwt spectrum slope lives in (-3, -1) while the wang slope
lives in (-2, 0); the two level-energy conventions differ and must not be
mixed with the other method's H mapping.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .best_basis import basis_coefficients, best_basis
from .errors import ConfigurationError, EstimationError
from .wavelets import PacketTree

METHODS = ("dwt", "wang", "jones")


@dataclass(frozen=True)
class SpectrumPoint:
    """One spectrum sample: decomposition level and base-2 log energy."""

    level: int
    log_energy: float


@dataclass(frozen=True)
class SlopeFit:
    """Ordinary least-squares line through spectrum or rank-size points."""

    slope: float
    intercept: float
    n_points: int
    r_squared: float


@dataclass(frozen=True)
class ScalingDescriptor:
    """Method tag, fitted slope, derived Hurst estimate, and diagnostics."""

    method: str
    slope: float
    hurst: float
    fit: SlopeFit


def _level_points(tree: PacketTree, levels, energy_of) -> list:
    if levels is None:
        levels = list(tree.decomposed_levels)
    levels = sorted(set(int(j) for j in levels))
    if not levels:
        raise ConfigurationError("no spectrum levels requested")
    pts = []
    for j in levels:
        e = energy_of(j)
        if e <= 0.0:
            warnings.warn(
                f"level {j} has zero energy; point dropped", RuntimeWarning,
                stacklevel=3)
            continue
        pts.append(SpectrumPoint(level=j, log_energy=float(np.log2(e))))
    return pts


def spectrum_dwt(tree: PacketTree, levels=None) -> list:
    """Log energies of the pyramid detail node (j, 1) per requested level.

    ``levels`` defaults to every decomposed level.  Zero-energy levels are
    dropped with a warning; an empty request raises ConfigurationError.
    """
    def energy(j):
        node = tree.coeffs(j, 1)
        return float(np.mean(node * node))

    return _level_points(tree, levels, energy)


def spectrum_wang(tree: PacketTree, levels=None) -> list:
    """Log energies averaged across all detail nodes of each level.

    A detail node is any node reached through a final high-pass step (odd
    index); level j holds 2**(J-j-1) of them.  The level energy is the
    mean over detail nodes of the per-node mean squared coefficient, which
    coincides with spectrum_dwt on the first decomposition level where the
    only detail node is (J-1, 1).
    """
    def energy(j):
        det = tree.detail_matrix(j)
        return float(np.mean(np.mean(det * det, axis=1)))

    return _level_points(tree, levels, energy)


def fit_slope(points) -> SlopeFit:
    """Least-squares slope of log energy against level index.

    Requires at least two points at distinct levels.
    """
    if len(points) < 2:
        raise EstimationError(
            f"slope fit needs at least 2 spectrum points, got {len(points)}")
    xs = np.array([p.level for p in points], dtype=float)
    ys = np.array([p.log_energy for p in points], dtype=float)
    if np.unique(xs).size < 2:
        raise EstimationError("slope fit needs points at distinct levels")
    return _ols(xs, ys)


def _ols(xs: np.ndarray, ys: np.ndarray) -> SlopeFit:
    xm, ym = xs.mean(), ys.mean()
    dx, dy = xs - xm, ys - ym
    sxx = float(np.dot(dx, dx))
    sxy = float(np.dot(dx, dy))
    syy = float(np.dot(dy, dy))
    slope = sxy / sxx
    intercept = ym - slope * xm
    if syy > 0.0:
        r2 = min(1.0, sxy * sxy / (sxx * syy))
    else:
        r2 = 1.0
    return SlopeFit(slope=slope, intercept=intercept,
                    n_points=len(xs), r_squared=r2)


def hurst_dwt(slope: float) -> float:
    """H = -(slope + 1) / 2; not clamped to [0, 1]."""
    return -(slope + 1.0) / 2.0


def hurst_wang(slope: float) -> float:
    """H = -slope / 2; not clamped to [0, 1]."""
    return -slope / 2.0


def rank_size_fit(values) -> SlopeFit:
    """Log-log regression of sorted magnitudes against their rank.

    Absolute values are sorted in descending order and paired with ranks
    1..N, so an exceedance law count(value > a) ~ a**(-delta) shows up as
    a straight line of ln(value) against ln(rank).  Zero entries (a
    measure-zero event for real-valued coefficients) are excluded since
    their logs are undefined.

    Raises EstimationError when fewer than two nonzero values exist.
    """
    c = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    ranks = np.arange(1, len(c) + 1, dtype=float)
    nz = c > 0.0
    if np.count_nonzero(nz) < 2:
        raise EstimationError(
            "rank-size fit needs at least 2 nonzero coefficients")
    return _ols(np.log(ranks[nz]), np.log(c[nz]))


def hurst_jones(tree: PacketTree) -> ScalingDescriptor:
    """Rank-size Hurst estimate from the entropy-best basis.

    All coefficients of the selected basis enter the rank-size fit; the
    fitted slope d maps to H = |d + 1|.
    """
    selection = best_basis(tree)
    fit = rank_size_fit(basis_coefficients(tree, selection))
    return ScalingDescriptor(
        method="jones",
        slope=fit.slope,
        hurst=abs(fit.slope + 1.0),
        fit=fit,
    )


def scaling_descriptor(method: str, tree: PacketTree, levels=None) -> ScalingDescriptor:
    """Run one named estimator on a decomposed signal.

    ``levels`` restricts the spectrum regression for the dwt and wang
    methods and is ignored by jones, which always uses the whole basis.
    """
    if method == "dwt":
        fit = fit_slope(spectrum_dwt(tree, levels))
        return ScalingDescriptor("dwt", fit.slope, hurst_dwt(fit.slope), fit)
    if method == "wang":
        fit = fit_slope(spectrum_wang(tree, levels))
        return ScalingDescriptor("wang", fit.slope, hurst_wang(fit.slope), fit)
    if method == "jones":
        return hurst_jones(tree)
    raise ConfigurationError(f"unknown method {method!r}; choose from {METHODS}")
