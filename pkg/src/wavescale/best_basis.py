"""Entropy-minimal basis selection over a wavelet packet tree.

The additive cost is the non-normalized Shannon entropy of a coefficient
vector.  A bottom-up scan touches each node a constant number of times and
returns the cheapest set of nodes that tiles the signal axis exactly once
(a disjoint dyadic cover, hence an orthonormal basis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import PacketTree


@dataclass(frozen=True)
class BasisSelection:
    """Nodes of a disjoint dyadic cover plus its total cost.

    ``nodes`` are (level, index) pairs; together they hold exactly N
    coefficients.
    """

    nodes: tuple
    total_cost: float


def shannon_cost(x: np.ndarray) -> float:
    """Non-normalized Shannon entropy, -sum(x_i^2 * ln(x_i^2)).

    Zero entries contribute nothing (the 0*ln 0 := 0 convention), so the
    cost of an all-zero vector is 0.  Small when energy is concentrated in
    few coefficients; can be negative when individual energies exceed 1.
    """
    x = np.asarray(x, dtype=float)
    e = x * x
    e = e[e > 0.0]
    if e.size == 0:
        return 0.0
    return float(-np.sum(e * np.log(e)))


def best_basis(tree: PacketTree) -> BasisSelection:
    """Minimal-cost dyadic cover of the packet table.

    Bottom-up marking: every bottom-level node starts marked; a parent is
    marked when its own cost does not exceed the best combined cost of its
    children (ties keep the parent, preferring fewer, coarser nodes),
    otherwise it inherits the children's combined cost.  The topmost
    marked nodes form the selection, and its total cost is minimal over
    all admissible covers.

    A tree of depth 0 selects the root trivially.
    """
    J = tree.data_level
    costs = [
        np.array([shannon_cost(row) for row in lev]) for lev in tree.levels
    ]
    best = costs[tree.depth].copy()
    marked = [None] * (tree.depth + 1)
    marked[tree.depth] = np.ones(best.shape, dtype=bool)
    for d in range(tree.depth - 1, -1, -1):
        combined = best[0::2] + best[1::2]
        marked[d] = costs[d] <= combined
        best = np.where(marked[d], costs[d], combined)

    nodes = []
    stack = [(0, 0)]
    while stack:
        d, n = stack.pop()
        if marked[d][n]:
            nodes.append((J - d, n))
        else:
            stack.append((d + 1, 2 * n + 1))
            stack.append((d + 1, 2 * n))
    nodes.sort(key=lambda jn: (-jn[0], jn[1]))
    return BasisSelection(nodes=tuple(nodes), total_cost=float(best[0]))


def basis_coefficients(tree: PacketTree, selection: BasisSelection) -> np.ndarray:
    """Concatenate the selected nodes' coefficients (selection order)."""
    return np.concatenate([tree.coeffs(j, n) for j, n in selection.nodes])
