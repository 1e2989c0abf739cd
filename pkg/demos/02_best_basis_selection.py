"""Entropy best-basis search on signals with different structure.

A signal concentrated in a few packet atoms should pull the selection
toward those nodes; white noise has no preferred representation and the
search settles wherever the entropy bookkeeping is cheapest.
"""

import numpy as np

from wavescale import best_basis, make_filter, shannon_cost, synthesis_step, wpd_full

rng = np.random.default_rng(1)
f = make_filter("symmlet4")
n = 128
depth = 5


def describe(name, x):
    tree = wpd_full(x, f, depth)
    sel = best_basis(tree)
    by_level = {}
    for j, _ in sel.nodes:
        by_level[j] = by_level.get(j, 0) + 1
    print(f"{name}:")
    print(f"  root cost {shannon_cost(x):10.3f}   "
          f"best-basis cost {sel.total_cost:10.3f}")
    print(f"  {len(sel.nodes)} nodes selected: "
          + ", ".join(f"{c} at level {j}" for j, c in sorted(by_level.items())))


# one packet atom plus a little noise
atom = np.zeros(n // 4)
atom[3] = 1.0
clean = synthesis_step(atom, np.zeros_like(atom), f)
clean = synthesis_step(clean, np.zeros_like(clean), f)
describe("single packet atom", clean * 5.0)
describe("atom + noise", clean * 5.0 + 0.05 * rng.standard_normal(n))

# pure white noise: energy spread evenly, nothing to concentrate
describe("white noise", rng.standard_normal(n))

# an oscillation matched to a high-frequency band
t = np.arange(n)
describe("fast oscillation", np.cos(np.pi * t * 0.9))
