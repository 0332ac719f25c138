"""Uniform 1D grids, cell fields, initial profiles and error diagnostics.

Every 1D scheme in the package works on a :class:`CellField` living on a
:class:`Grid1D`. The exact solution of the advection equation is represented
by cell averages of the translated initial profile, computed in closed form
whenever the profile knows its antiderivative.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import erf

from .errors import CFLError

__all__ = [
    "Grid1D",
    "CellField",
    "CflParams",
    "Profile",
    "Constant",
    "PiecewiseConstant",
    "Step",
    "Box",
    "Gaussian",
    "Sinusoid",
    "project_initial",
    "exact_advect_average",
    "cell_integral",
    "norm",
    "total_variation",
    "estimate_eoc",
    "pad",
    "write_csv",
    "read_csv",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform partition of ``[x_min, x_max]`` into ``n_cells`` cells.

    ``boundary`` is ``"periodic"`` or ``"inflow"``; inflow grids copy the
    prescribed ``ghost`` values (left, right) into ghost cells.
    """

    x_min: float
    x_max: float
    n_cells: int
    boundary: str = "periodic"
    ghost: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.boundary not in ("periodic", "inflow"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"


@dataclass(frozen=True)
class CellField:
    """Cell values on a grid. The value array is read-only."""

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} values, got shape {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "CellField":
        return CellField(self.grid, values)

    def mass(self) -> float:
        return float(self.values.sum() * self.grid.dx)

    def __len__(self):
        return self.grid.n_cells


@dataclass(frozen=True)
class CflParams:
    u: float
    dt: float
    dx: float

    @property
    def nu(self) -> float:
        return self.u * self.dt / self.dx


def check_cfl(nu: float, upper: float = 1.0, strict: bool = False):
    """Raise :class:`CFLError` unless ``|nu| <= upper`` (``<`` if strict)."""
    a = abs(nu)
    if not np.isfinite(a) or a > upper or (strict and a == upper):
        raise CFLError(f"CFL number {nu} outside the admissible range")


def pad(values: np.ndarray, grid: Grid1D, left: int, right: int) -> np.ndarray:
    """Extend ``values`` by ghost cells according to the grid boundary."""
    if grid.periodic:
        n = values.shape[-1]
        idx = np.arange(-left, n + right) % n
        return values[..., idx]
    lo = np.full(values.shape[:-1] + (left,), grid.ghost[0])
    hi = np.full(values.shape[:-1] + (right,), grid.ghost[1])
    return np.concatenate([lo, values, hi], axis=-1)


# ---------------------------------------------------------------------------
# Initial profiles with closed-form antiderivatives

class Profile:
    """A function of x that can also integrate itself exactly.

    Subclasses implement ``__call__`` and ``antiderivative``; ``jumps`` lists
    discontinuity locations (used by the quadrature fallback).
    """

    jumps: tuple[float, ...] = ()

    def __call__(self, x):
        raise NotImplementedError

    def antiderivative(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Profile):
    value: float = 0.0

    def __call__(self, x):
        return np.full(np.shape(x), float(self.value))

    def antiderivative(self, x):
        return self.value * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class PiecewiseConstant(Profile):
    """``values[0]`` left of ``breaks[0]``, ``values[i]`` on ``[breaks[i-1], breaks[i])``."""

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.breaks)
        v = tuple(float(x) for x in self.values)
        if len(v) != len(b) + 1:
            raise ValueError("need len(values) == len(breaks) + 1")
        if any(b2 <= b1 for b1, b2 in zip(b, b[1:])):
            raise ValueError("breaks must be increasing")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "values", v)

    @property
    def jumps(self):
        return self.breaks

    def __call__(self, x):
        idx = np.searchsorted(self.breaks, np.asarray(x, dtype=float), side="right")
        return np.asarray(self.values)[idx]

    def antiderivative(self, x):
        # F(x) = integral from breaks[0] (or 0 without breaks) to x
        x = np.asarray(x, dtype=float)
        if not self.breaks:
            return self.values[0] * x
        b = np.asarray(self.breaks)
        v = np.asarray(self.values)
        # integral from b[0] to b[i]
        cum = np.concatenate([[0.0], np.cumsum(v[1:-1] * np.diff(b))])
        idx = np.searchsorted(b, x, side="right")
        base = np.where(idx == 0, 0.0, cum[np.maximum(idx - 1, 0)])
        anchor = b[np.maximum(idx - 1, 0)]
        return base + v[idx] * (x - anchor)


def Step(x0: float, left: float = 1.0, right: float = 0.0) -> PiecewiseConstant:
    """Single jump at ``x0``."""
    return PiecewiseConstant((x0,), (left, right))


def Box(a: float, b: float, inside: float = 1.0, outside: float = 0.0) -> PiecewiseConstant:
    """Indicator-like profile equal to ``inside`` on ``[a, b)``."""
    return PiecewiseConstant((a, b), (outside, inside, outside))


@dataclass(frozen=True)
class Gaussian(Profile):
    center: float = 0.5
    width: float = 0.1
    amplitude: float = 1.0

    def __call__(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * np.exp(-z * z)

    def antiderivative(self, x):
        z = (np.asarray(x, dtype=float) - self.center) / self.width
        return self.amplitude * self.width * math.sqrt(math.pi) / 2 * erf(z)


@dataclass(frozen=True)
class Sinusoid(Profile):
    """``offset + amplitude * sin(2 pi k x / period)``."""

    period: float = 1.0
    k: int = 1
    amplitude: float = 1.0
    offset: float = 0.0

    def __call__(self, x):
        w = 2 * math.pi * self.k / self.period
        return self.offset + self.amplitude * np.sin(w * np.asarray(x, dtype=float))

    def antiderivative(self, x):
        w = 2 * math.pi * self.k / self.period
        x = np.asarray(x, dtype=float)
        return self.offset * x - self.amplitude / w * np.cos(w * x)


# ---------------------------------------------------------------------------
# Quadrature fallback for arbitrary callables

_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


def _gauss(f, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    y = np.asarray(f(mid + half * _GL_X), dtype=float)
    return half * float(np.dot(_GL_W, y))


def _adaptive(f, a, b, whole, tol, depth):
    m = 0.5 * (a + b)
    left, right = _gauss(f, a, m), _gauss(f, m, b)
    if depth <= 0 or abs(left + right - whole) < tol:
        return left + right
    return _adaptive(f, a, m, left, tol, depth - 1) + _adaptive(f, m, b, right, tol, depth - 1)


def cell_integral(f: Callable, a: float, b: float, jumps: Iterable[float] = (), tol=1e-12) -> float:
    """Integral of ``f`` over ``[a, b]`` by adaptive bisection.

    Known jump locations inside the interval are used as split points so
    that piecewise-smooth data are integrated to full precision.
    """
    pts = [a] + sorted(x for x in jumps if a < x < b) + [b]
    total = 0.0
    for lo, hi in zip(pts, pts[1:]):
        total += _adaptive(f, lo, hi, _gauss(f, lo, hi), tol, 50)
    return total


def _periodic_antiderivative(F, x, x_min, length, total):
    shifts = np.floor((x - x_min) / length)
    r = x - shifts * length
    return shifts * total + F(r)


def _averages(f, grid: Grid1D, shift: float, jumps) -> np.ndarray:
    a = grid.faces[:-1] - shift
    b = grid.faces[1:] - shift
    if hasattr(f, "antiderivative"):
        F = f.antiderivative
        if grid.periodic and shift != 0.0:
            total = float(F(grid.x_max) - F(grid.x_min))
            Fa = _periodic_antiderivative(F, a, grid.x_min, grid.length, total)
            Fb = _periodic_antiderivative(F, b, grid.x_min, grid.length, total)
        else:
            Fa, Fb = F(a), F(b)
        return (np.asarray(Fb) - np.asarray(Fa)) / grid.dx

    jumps = tuple(getattr(f, "jumps", ())) if jumps is None else tuple(jumps)
    if grid.periodic:
        L = grid.length

        def g(x):
            return f(grid.x_min + np.mod(np.asarray(x) - grid.x_min, L))

        # translated jump images plus the wrap point of the domain
        shifted = [j + shift + m * L for j in jumps for m in range(-2, 3)]
        shifted += [grid.x_min + shift + m * L for m in range(-2, 3)]
    else:
        g = f
        shifted = [j + shift for j in jumps]
    out = np.empty(grid.n_cells)
    for i, (lo, hi) in enumerate(zip(grid.faces[:-1], grid.faces[1:])):
        out[i] = cell_integral(lambda x: g(x - shift), lo, hi, shifted) / grid.dx
    return out


def project_initial(f: Callable, grid: Grid1D, mode: str = "average", jumps=None) -> CellField:
    """Discretise an initial profile as point values or cell averages."""
    if mode == "point":
        vals = np.asarray(f(grid.centers), dtype=float)
        vals = np.broadcast_to(vals, (grid.n_cells,))
    elif mode == "average":
        vals = _averages(f, grid, 0.0, jumps)
    else:
        raise ValueError(f"unknown projection mode {mode!r}")
    if not np.all(np.isfinite(vals)):
        raise ValueError("initial profile produced non-finite values")
    return CellField(grid, vals)


def exact_advect_average(f: Callable, grid: Grid1D, u: float, t: float, jumps=None) -> CellField:
    """Cell averages of ``x -> f(x - u t)`` (periodic wrap on periodic grids)."""
    vals = _averages(f, grid, u * t, jumps)
    if not np.all(np.isfinite(vals)):
        raise ValueError("profile produced non-finite values")
    return CellField(grid, vals)


# ---------------------------------------------------------------------------
# Diagnostics

def _diff(a, b):
    if isinstance(a, CellField) and isinstance(b, CellField):
        if a.grid != b.grid:
            raise ValueError("fields live on different grids")
        return a.values - b.values, a.grid.dx
    raise TypeError("norm expects two CellField instances")


def norm(a: CellField, b: CellField, kind: str = "L1") -> float:
    """Discrete L1, L2 or Linf distance between two fields on the same grid."""
    d, dx = _diff(a, b)
    if kind == "L1":
        return float(dx * np.abs(d).sum())
    if kind == "L2":
        return float(math.sqrt(dx * np.dot(d, d)))
    if kind == "Linf":
        return float(np.abs(d).max())
    raise ValueError(f"unknown norm {kind!r}")


def total_variation(a) -> float:
    """Sum of absolute jumps, closed periodically on periodic grids."""
    if isinstance(a, CellField):
        v, closed = a.values, a.grid.periodic
    else:
        v, closed = np.asarray(a, dtype=float), True
    tv = np.abs(np.diff(v)).sum()
    if closed and v.size > 1:
        tv += abs(v[0] - v[-1])
    return float(tv)


def estimate_eoc(errors: Sequence[float], dxs: Sequence[float]) -> list[float | None]:
    """Pairwise observed orders ``log(e_i/e_{i+1}) / log(dx_i/dx_{i+1})``.

    A pair involving a zero error has no defined order and yields ``None``.
    """
    if len(errors) != len(dxs) or len(errors) < 2:
        raise ValueError("need matching sequences of length >= 2")
    if any(d2 >= d1 for d1, d2 in zip(dxs, dxs[1:])):
        raise ValueError("dxs must be strictly decreasing")
    if any(e < 0 for e in errors):
        raise ValueError("errors must be non-negative")
    out = []
    for (e1, e2), (h1, h2) in zip(zip(errors, errors[1:]), zip(dxs, dxs[1:])):
        if e1 == 0 or e2 == 0:
            out.append(None)
        else:
            out.append(math.log(e1 / e2) / math.log(h1 / h2))
    return out


# ---------------------------------------------------------------------------
# CSV

def write_csv(c: CellField, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,value\n")
        for x, v in zip(c.grid.centers, c.values):
            fh.write(f"{x:.17g},{v:.17g}\n")


def read_csv(path, grid: Grid1D) -> CellField:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return CellField(grid, [float(r["value"]) for r in rows])
