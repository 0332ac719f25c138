"""Half level set of the upwind scheme's modified equation.

The upwind scheme is, to second order, the advection-diffusion equation with
viscosity ``mu = dx (1 - nu) / 2``. For a Heaviside datum its solution is a
normal CDF centred on ``u t``, so the 1/2 level set travels exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .core1d import CellField

__all__ = ["ModifiedEqParams", "modified_solution", "extract_half_level"]


@dataclass(frozen=True)
class ModifiedEqParams:
    u: float
    mu: float
    t: float

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("viscosity must be non-negative")

    @classmethod
    def from_scheme(cls, u: float, dx: float, nu: float, t: float) -> "ModifiedEqParams":
        return cls(u, dx * (1.0 - nu) / 2.0, t)


def modified_solution(x, params: ModifiedEqParams):
    """``Phi((x - u t) / sqrt(2 mu t))`` with ``Phi`` the standard normal CDF."""
    if params.t <= 0:
        raise ValueError("modified_solution needs t > 0")
    z = np.asarray(x, dtype=float) - params.u * params.t
    if params.mu == 0:
        out = np.where(z > 0, 1.0, np.where(z < 0, 0.0, 0.5))
    else:
        out = 0.5 * erfc(-z / (2.0 * math.sqrt(params.mu * params.t)))
    return out if np.ndim(out) else float(out)


def extract_half_level(c: CellField) -> list[float]:
    """Positions where the piecewise-linear interpolant of ``c`` crosses 1/2.

    Crossings between neighbouring centres are linearly interpolated; a run
    of cells equal to 1/2 contributes the midpoint of the run. Returns an
    empty list when there is no crossing.
    """
    x = c.grid.centers
    d = c.values - 0.5
    out = []
    n = len(d)
    i = 0
    while i < n:
        if d[i] == 0:
            j = i
            while j + 1 < n and d[j + 1] == 0:
                j += 1
            out.append(0.5 * (x[i] + x[j]))
            i = j + 1
            continue
        if i + 1 < n and d[i] * d[i + 1] < 0:
            out.append(x[i] + c.grid.dx * (0.5 - c.values[i]) / (c.values[i + 1] - c.values[i]))
        i += 1
    return out
