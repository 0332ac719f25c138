"""Flux limiters on a box: smearing of minmod and superbee against the
limited downwind (UltraBee) scheme, which transports the box exactly.

Run: python3 demos/02_limiters.py
"""
import numpy as np

from sharpfv.core1d import Box, CellField, Grid1D, exact_advect_average, norm, project_initial, total_variation
from sharpfv.limited import l2_decrease_rate, step_flux_limited, step_limited_downwind

g = Grid1D(0.0, 1.0, 100)
box = Box(0.2, 0.5)
nu, steps = 0.4, 500
c0 = project_initial(box, g)
exact = exact_advect_average(box, g, 1.0, steps * nu * g.dx)

for name in ("minmod", "superbee", "limited_downwind"):
    c = c0
    for _ in range(steps):
        c = step_limited_downwind(c, nu) if name == "limited_downwind" else step_flux_limited(c, nu, name)
    mixed = int(((c.values > 1e-6) & (c.values < 1 - 1e-6)).sum())
    print(f"{name:17s} L1 error {norm(c, exact):.2e}  mixed cells {mixed:3d}  "
          f"TV {total_variation(c):.4f}")

# The semi-discrete L2 rate: minmod never raises the L2 norm, superbee can
jumps = np.array([1, 2, 4, 8, 4, 2, 1.0])
v = np.cumsum(np.concatenate([[0, 0], jumps, [0, 0], -jumps, [0, 0]])) / jumps.sum()
w = CellField(Grid1D(0.0, 1.0, len(v)), v)
print(f"d/dt ||c||^2 / 2 on a smooth hump: minmod {l2_decrease_rate(w, 'minmod'):+.3f}, "
      f"superbee {l2_decrease_rate(w, 'superbee'):+.3f}")
