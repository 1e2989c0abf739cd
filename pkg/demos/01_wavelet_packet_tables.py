"""Walk through the filter banks and the two decompositions.

Shows the pyramid (DWT) and the full packet table side by side on a toy
signal, checks energy conservation per level, and points out where the
pyramid sits inside the packet table.
"""

import numpy as np

from wavescale import dwt_forward, make_filter, wpd_full

rng = np.random.default_rng(0)

# a signal with both smooth structure and an oscillatory burst
n = 256
t = np.arange(n) / n
x = np.sin(2 * np.pi * 3 * t) + 0.4 * rng.standard_normal(n)
x[96:160] += np.sin(2 * np.pi * 60 * t[96:160])

f = make_filter("symmlet4")
print(f"filter family: {f.family}, {f.length} taps")
print(f"tap sum       = {f.low.sum():.12f} (sqrt(2) = {np.sqrt(2):.12f})")
print(f"tap energy    = {np.dot(f.low, f.low):.12f}")

depth = 5
tree = wpd_full(x, f, depth)
print(f"\npacket table of a {n}-point signal, {depth} levels "
      f"(data level = {tree.data_level})")
energy = np.dot(x, x)
for d, lev in enumerate(tree.levels):
    j = tree.data_level - d
    total = np.sum(lev * lev)
    print(f"  level {j}: {lev.shape[0]:3d} nodes x {lev.shape[1]:4d} coeffs, "
          f"energy {total:10.4f} (input {energy:.4f})")

# the pyramid transform is the low-pass spine of the packet table
dec = dwt_forward(x, f, depth)
print(f"\npyramid coefficients: approx at level {dec.approx_level} plus "
      f"details at levels {sorted(dec.details)}")
for j, detail in sorted(dec.details.items()):
    same = np.array_equal(detail, tree.coeffs(j, 1))
    print(f"  detail level {j}: equals packet node ({j}, 1): {same}")
approx_level = tree.data_level - depth
same = np.array_equal(dec.approx, tree.coeffs(approx_level, 0))
print(f"  approximation equals packet node ({approx_level}, 0): {same}")
