"""Directional splitting of the limited downwind scheme on a Cartesian grid.

A face-aligned square moves exactly; a smooth round plateau stays within
its bounds but its 2D total variation grows as staircase oscillations form.

Run: python3 demos/05_split_ultrabee.py
"""
import numpy as np

from sharpfv.core1d import Box, Grid1D, exact_advect_average, project_initial
from sharpfv.vofire import smooth_disk_average, split_ultrabee_2d, total_variation_2d

g = Grid1D(0.0, 1.0, 64)
box = Box(0.25, 0.75)
cx = project_initial(box, g).values
c = np.outer(cx, cx)
for s in range(1, 161):
    c = split_ultrabee_2d(c, 0.4, 0.4)
e = exact_advect_average(box, g, 1.0, 160 * 0.4 * g.dx).values
print(f"square after 160 steps: max error vs tensor product {np.abs(c - np.outer(e, e)).max():.1e}")

b = smooth_disk_average(64)
tv0 = total_variation_2d(b)
print(f"plateau: initial TV {tv0:.3f}, range [{b.min():.3f}, {b.max():.3f}]")
for s in range(1, 161):
    b = split_ultrabee_2d(b, 0.4, 0.4)
    if s in (1, 2, 10, 40, 160):
        print(f"step {s:3d}: TV {total_variation_2d(b):.3f}  range [{b.min():.3f}, {b.max():.3f}]")
