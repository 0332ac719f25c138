"""Linear (p, k) schemes: weights, stability and the slow L1 rate on a step.

Run: python3 demos/01_linear_schemes.py
"""
import numpy as np

from sharpfv.core1d import Grid1D, Step, exact_advect_average, norm, project_initial, estimate_eoc
from sharpfv.linear_schemes import is_coefficients, is_stable_pair, max_amplification, step_linear

# Weights at nu = 0.5 for a few schemes
for p, k in [(1, 0), (2, 1), (2, 0), (3, 1)]:
    c = is_coefficients(p, k, 0.5)
    print(f"(p,k)=({p},{k}) offsets {c.offsets.tolist()} weights {np.round(c.alphas, 4).tolist()}")

# Stable families versus an unstable pair
for p, k in [(3, 1), (3, 0), (5, 2), (5, 1)]:
    g = max(max_amplification(is_coefficients(p, k, nu)) for nu in np.arange(1, 10) / 10)
    print(f"(p,k)=({p},{k}) stable family: {is_stable_pair(p, k)}, max |g| = {g:.6f}")

# A discontinuity caps the L1 rate at p/(p+1)
f = Step(0.5)
for p, k in [(1, 0), (3, 1)]:
    coeffs = is_coefficients(p, k, 0.5)
    errs, dxs = [], []
    for n in (200, 400, 800, 1600):
        g = Grid1D(0.0, 1.0, n)
        c = project_initial(f, g)
        steps = round(0.5 / (0.5 * g.dx))
        for _ in range(steps):
            c = step_linear(c, coeffs)
        errs.append(norm(c, exact_advect_average(f, g, 1.0, steps * 0.5 * g.dx)))
        dxs.append(g.dx)
    print(f"(p,k)=({p},{k}) step-datum EOC {np.round(estimate_eoc(errs, dxs), 3).tolist()}"
          f" vs p/(p+1) = {p / (p + 1):.3f}")
