"""Orthonormal filter banks and periodic Mallat-cascade decompositions.

Level convention used throughout the package: a signal of dyadic length
N = 2**J sits at level J, the first analysis step produces level J - 1,
and the deepest possible level is 0 (single-coefficient nodes).  Node
(j, n) holds 2**j coefficients for a full-length signal; its children are
(j - 1, 2n) through the low-pass filter and (j - 1, 2n + 1) through the
high-pass filter.

All transforms use periodic (circular) boundary extension, which keeps
every decomposition level exactly orthonormal regardless of filter length,
so per-level energy equals the input energy (Parseval).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ShapeError

SQRT2 = np.sqrt(2.0)

# Low-pass analysis taps.  Haar is exact; the 8-tap symmlet with four
# vanishing moments uses the standard published values (normalized so the
# taps sum to sqrt(2) and have unit energy).
_LOW_PASS_TAPS = {
    "haar": np.array([1.0, 1.0]) / SQRT2,
    "symmlet4": np.array([
        -0.07576571478927333,
        -0.02963552764599851,
        0.49761866763201545,
        0.8037387518059161,
        0.29785779560527736,
        -0.09921954357684722,
        -0.012603967262037833,
        0.0322231006040427,
    ]),
}


@dataclass(frozen=True)
class FilterPair:
    """Orthonormal low/high-pass analysis pair defining a wavelet family."""

    family: str
    low: np.ndarray
    high: np.ndarray
    length: int


@dataclass(frozen=True)
class PacketNode:
    """One node of a packet tree: coefficients at (level, index)."""

    level: int
    index: int
    coeffs: np.ndarray


@dataclass(frozen=True)
class PacketTree:
    """Full wavelet packet table of a dyadic-length signal.

    ``levels[d]`` is a (2**d, N / 2**d) matrix whose rows are the nodes of
    level ``J - d`` in index order; ``levels[0]`` is the input signal
    itself.  Rows are read-only views shared across threads safely.
    """

    filter: FilterPair
    depth: int
    signal_length: int
    data_level: int
    levels: tuple = field(repr=False)

    def _depth_of(self, level: int) -> int:
        d = self.data_level - level
        if d < 0 or d > self.depth:
            raise ConfigurationError(
                f"level {level} not present (decomposed levels are "
                f"{self.data_level - self.depth}..{self.data_level})")
        return d

    def coeffs(self, level: int, index: int) -> np.ndarray:
        """Coefficient vector of node (level, index)."""
        d = self._depth_of(level)
        if not 0 <= index < (1 << d):
            raise ConfigurationError(
                f"node index {index} out of range at level {level}")
        return self.levels[d][index]

    def node(self, level: int, index: int) -> PacketNode:
        return PacketNode(level, index, self.coeffs(level, index))

    def level_matrix(self, level: int) -> np.ndarray:
        """All nodes of one level as rows, in index order."""
        return self.levels[self._depth_of(level)]

    def detail_matrix(self, level: int) -> np.ndarray:
        """Rows for the odd-index nodes of a level.

        These are exactly the nodes produced by a high-pass application,
        i.e. the detail nodes used by the level-energy estimators.
        """
        d = self._depth_of(level)
        if d == 0:
            raise ConfigurationError("the data level has no detail nodes")
        return self.levels[d][1::2]

    @property
    def decomposed_levels(self) -> range:
        """Levels holding decomposition output, finest first."""
        return range(self.data_level - 1, self.data_level - self.depth - 1, -1)


@dataclass(frozen=True)
class DwtDecomposition:
    """Pyramid coefficients: one approximation block plus per-level details.

    ``details[j]`` holds the detail coefficients of level j for
    j = approx_level .. data_level - 1; ``approx`` sits at ``approx_level``.
    """

    filter: FilterPair
    signal_length: int
    data_level: int
    approx_level: int
    approx: np.ndarray
    details: dict

    @property
    def coefficient_count(self) -> int:
        return len(self.approx) + sum(len(v) for v in self.details.values())


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def make_filter(family: str) -> FilterPair:
    """Build the analysis filter pair for a named wavelet family.

    The high-pass taps follow the quadrature-mirror relation
    g[k] = (-1)**k * h[L-1-k].  Tap tables are validated at construction:
    sum sqrt(2), unit energy, and vanishing even-shift autocorrelation,
    each to 1e-12.

    Raises
    ------
    ConfigurationError
        If the family is unknown or a tap table fails validation.
    """
    try:
        low = _LOW_PASS_TAPS[family].copy()
    except KeyError:
        raise ConfigurationError(
            f"unknown wavelet family {family!r}; "
            f"choose from {sorted(_LOW_PASS_TAPS)}") from None
    L = len(low)
    k = np.arange(L)
    high = (-1.0) ** k * low[::-1]
    _validate_taps(family, low)
    return FilterPair(family, _freeze(low), _freeze(high), L)


def _validate_taps(family: str, low: np.ndarray) -> None:
    tol = 1e-12
    if abs(low.sum() - SQRT2) > tol:
        raise ConfigurationError(f"{family}: tap sum differs from sqrt(2)")
    if abs(np.dot(low, low) - 1.0) > tol:
        raise ConfigurationError(f"{family}: taps do not have unit energy")
    L = len(low)
    for m in range(1, L // 2):
        if abs(np.dot(low[: L - 2 * m], low[2 * m :])) > tol:
            raise ConfigurationError(
                f"{family}: shift-{2 * m} autocorrelation is nonzero")


def _analysis_rows(rows: np.ndarray, f: FilterPair):
    """One analysis step applied to every row of a matrix.

    Row r maps to approx[r, k] = sum_i h[i] * rows[r, (2k+i) mod n] and the
    analogous high-pass output; both halves have n/2 columns.  Taps
    accumulate in index order so results are bit-identical regardless of
    how many rows are processed together.
    """
    n = rows.shape[1]
    if n % 2:
        raise ShapeError(f"analysis step needs an even length, got {n}")
    base = 2 * np.arange(n // 2)
    approx = np.zeros((rows.shape[0], n // 2))
    detail = np.zeros_like(approx)
    for i in range(f.length):
        cols = rows[:, (base + i) % n]
        approx += f.low[i] * cols
        detail += f.high[i] * cols
    return approx, detail


def analysis_step(x: np.ndarray, f: FilterPair):
    """Split a vector into approximation and detail halves.

    Periodic extension: coefficient k of each output reads the input at
    positions (2k + i) mod len(x).  Raises ShapeError on odd input length.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ShapeError("analysis_step expects a 1-D vector")
    approx, detail = _analysis_rows(x[None, :], f)
    return approx[0], detail[0]


def synthesis_step(approx: np.ndarray, detail: np.ndarray, f: FilterPair) -> np.ndarray:
    """Adjoint of analysis_step; exact inverse for orthonormal pairs.

    Kept for reconstruction checks and for building packet basis vectors;
    the estimators themselves never synthesize.
    """
    approx = np.asarray(approx, dtype=float)
    detail = np.asarray(detail, dtype=float)
    if approx.shape != detail.shape or approx.ndim != 1:
        raise ShapeError("approx and detail must be 1-D and equally long")
    half = len(approx)
    n = 2 * half
    x = np.zeros(n)
    pos = 2 * np.arange(half)
    for i in range(f.length):
        p = (pos + i) % n
        x[p] += f.low[i] * approx
        x[p] += f.high[i] * detail
    return x


def _check_dyadic(x: np.ndarray) -> int:
    n = len(x)
    if n < 2 or n & (n - 1):
        raise ShapeError(f"signal length {n} is not a power of two")
    return n.bit_length() - 1


def dwt_forward(x: np.ndarray, f: FilterPair, depth: int) -> DwtDecomposition:
    """Pyramid transform: iterate the analysis step on the approximation.

    ``depth`` steps leave the approximation at level J - depth along with
    detail vectors for levels J - 1 down to J - depth.  Requires a dyadic
    length and 1 <= depth <= J.
    """
    x = np.asarray(x, dtype=float)
    J = _check_dyadic(x)
    if not 1 <= depth <= J:
        raise ConfigurationError(f"depth must be in 1..{J}, got {depth}")
    details = {}
    approx = x
    for step in range(1, depth + 1):
        approx, detail = _analysis_rows(approx[None, :], f)
        approx, detail = approx[0], detail[0]
        details[J - step] = _freeze(detail)
    return DwtDecomposition(
        filter=f,
        signal_length=len(x),
        data_level=J,
        approx_level=J - depth,
        approx=_freeze(approx),
        details=details,
    )


def wpd_full(x: np.ndarray, f: FilterPair, depth: int) -> PacketTree:
    """Full packet decomposition: both filters applied to every node.

    Level J - d (d = 1..depth) receives 2**d nodes; every level carries N
    coefficients in total.  Requires a dyadic length and 1 <= depth <= J.
    """
    x = np.asarray(x, dtype=float)
    J = _check_dyadic(x)
    if depth > J:
        raise ConfigurationError(f"depth {depth} exceeds {J} available levels")
    if depth < 1:
        raise ConfigurationError("depth must be at least 1")
    levels = [_freeze(x[None, :].copy())]
    for _ in range(depth):
        approx, detail = _analysis_rows(levels[-1], f)
        m, half = approx.shape
        nxt = np.empty((2 * m, half))
        nxt[0::2] = approx
        nxt[1::2] = detail
        levels.append(_freeze(nxt))
    return PacketTree(
        filter=f,
        depth=depth,
        signal_length=len(x),
        data_level=J,
        levels=tuple(levels),
    )
