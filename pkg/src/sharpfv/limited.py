"""Flux-limited schemes and the limited downwind (anti-diffusive) scheme.

All steppers assume advection to the right (``nu > 0``); a negative CFL
number is handled by mirroring the field, stepping, and mirroring back.
Fluxes follow

    c_{j+1/2} = c_j + (1 - nu)/2 * phi_{j+1/2} * (c_{j+1} - c_j)

and the slope ratio ``r`` is never formed: ``phi(r) * (c_{j+1} - c_j)`` is
evaluated through the homogeneity of each limiter, so flat data give a
zero correction without any 0/0 policy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .core1d import CellField, check_cfl, pad
from .errors import CFLError

__all__ = [
    "LimiterKind",
    "FluxInterval",
    "minmod2",
    "minmod",
    "limiter_eval",
    "limited_increment",
    "step_flux_limited",
    "step_flux_limited_ratio",
    "downwind_interval",
    "limited_downwind_fluxes",
    "step_limited_downwind",
    "limited_downwind_axis",
    "l2_decrease_rate",
    "l2_decrease_rate_identity",
]


class LimiterKind(str, Enum):
    MINMOD = "minmod"
    SUPERBEE = "superbee"
    ULTRABEE = "ultrabee"


@dataclass(frozen=True)
class FluxInterval:
    omega: float | np.ndarray
    Omega: float | np.ndarray

    def clamp(self, value):
        return np.minimum(np.maximum(self.omega, value), self.Omega)


def minmod2(a, b):
    """Two-argument minmod; works elementwise on arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.where(a * b <= 0, 0.0, np.where(a > 0, np.minimum(a, b), np.maximum(a, b)))
    return out if out.ndim else float(out)


def minmod(*args):
    """n-ary minmod by left fold."""
    if not args:
        raise ValueError("minmod needs at least one argument")
    acc = args[0]
    for b in args[1:]:
        acc = minmod2(acc, b)
    return acc


def limiter_eval(kind, r, nu=None):
    """phi(r) for minmod and superbee, phi(r, nu) for ultrabee."""
    kind = LimiterKind(kind)
    r = np.asarray(r, dtype=float)
    if kind is LimiterKind.MINMOD:
        out = minmod2(1.0, r)
    elif kind is LimiterKind.SUPERBEE:
        with np.errstate(invalid="ignore"):
            out = np.maximum.reduce([np.zeros_like(r), np.minimum(1.0, 2 * r), np.minimum(2.0, r)])
    else:
        if nu is None or not 0.0 < nu < 1.0:
            raise ValueError("ultrabee needs 0 < nu < 1")
        with np.errstate(invalid="ignore"):
            out = minmod2(2 * r / nu, 2.0 / (1.0 - nu))
    out = np.asarray(out)
    return out if out.ndim else float(out)


def limited_increment(kind, d_up, d_face, nu=None):
    """``phi(r) * d_face`` with ``r = d_up / d_face``, without dividing.

    ``d_up = c_j - c_{j-1}`` and ``d_face = c_{j+1} - c_j``. Uses
    ``phi(r) d = F(d_up, d)`` where ``F`` is positively homogeneous and odd.
    """
    kind = LimiterKind(kind)
    d_up = np.asarray(d_up, dtype=float)
    d = np.asarray(d_face, dtype=float)
    if kind is LimiterKind.MINMOD:
        return minmod2(d, d_up)
    if kind is LimiterKind.ULTRABEE:
        return minmod2(2.0 * d_up / nu, 2.0 * d / (1.0 - nu))
    s = np.sign(d)
    a = np.abs(d)
    b = s * d_up
    return s * np.maximum.reduce([np.zeros_like(a), np.minimum(a, 2 * b), np.minimum(2 * a, b)])


def _mirror(step):
    def wrapped(c: CellField, nu, *args, **kwargs):
        if nu < 0:
            flipped = c.with_values(c.values[::-1])
            if not c.grid.periodic:
                g = c.grid.ghost
                flipped = CellField(replace(c.grid, ghost=(g[1], g[0])), c.values[::-1])
            out = step(flipped, -nu, *args, **kwargs)
            return c.with_values(out.values[::-1])
        return step(c, nu, *args, **kwargs)

    wrapped.__doc__ = step.__doc__
    wrapped.__name__ = step.__name__
    return wrapped


@_mirror
def step_flux_limited(c: CellField, nu: float, kind) -> CellField:
    """One step of the flux-limited scheme with limiter ``kind``."""
    kind = LimiterKind(kind)
    if not 0.0 < nu <= 1.0:
        raise CFLError(f"flux-limited step needs 0 < nu <= 1, got {nu}")
    if nu == 1.0:
        return _shift(c)
    if kind is LimiterKind.ULTRABEE and nu == 0.0:
        raise ValueError("ultrabee undefined at nu = 0")
    ext = pad(c.values, c.grid, 2, 1)
    # faces j-1/2 for j = 0..n, as differences of the padded array
    d = np.diff(ext)  # d[i] = ext[i+1] - ext[i]
    d_up, d_face = d[:-1], d[1:]
    flux = ext[1:-1] + 0.5 * (1.0 - nu) * limited_increment(kind, d_up, d_face, nu)
    return c.with_values(c.values - nu * np.diff(flux))


@_mirror
def step_flux_limited_ratio(c: CellField, nu: float, kind) -> CellField:
    """Same scheme with the slope ratio formed explicitly.

    Requires no two adjacent equal values; kept as an independent route for
    checking :func:`step_flux_limited` and the limited downwind scheme.
    """
    kind = LimiterKind(kind)
    if not 0.0 < nu < 1.0:
        raise CFLError(f"ratio form needs 0 < nu < 1, got {nu}")
    ext = pad(c.values, c.grid, 2, 1)
    d = np.diff(ext)
    if np.any(d == 0):
        raise ValueError("slope ratio undefined: adjacent equal values")
    r = d[:-1] / d[1:]
    phi = limiter_eval(kind, r, nu)
    flux = ext[1:-1] + 0.5 * (1.0 - nu) * phi * d[1:]
    return c.with_values(c.values - nu * np.diff(flux))


def _shift(c: CellField) -> CellField:
    return c.with_values(pad(c.values, c.grid, 1, 0)[:-1])


def downwind_interval(c_jm1, c_j, c_jp1, inv_nu) -> FluxInterval:
    """Admissible flux interval ``[lambda, Lambda] & [m, M]`` at face j+1/2.

    ``inv_nu = dx / (u dt)`` must be at least one.
    """
    if np.any(np.asarray(inv_nu) < 1.0):
        raise CFLError("inv_nu must be >= 1")
    c_jm1, c_j, c_jp1 = (np.asarray(v, dtype=float) for v in (c_jm1, c_j, c_jp1))
    M_up = np.maximum(c_jm1, c_j)
    m_up = np.minimum(c_jm1, c_j)
    lam = inv_nu * (c_j - M_up) + M_up
    Lam = inv_nu * (c_j - m_up) + m_up
    lo = np.maximum(lam, np.minimum(c_j, c_jp1))
    hi = np.minimum(Lam, np.maximum(c_j, c_jp1))
    if lo.ndim == 0:
        return FluxInterval(float(lo), float(hi))
    return FluxInterval(lo, hi)


def limited_downwind_fluxes(ext: np.ndarray, nu: float) -> np.ndarray:
    """Fluxes at faces between ``ext[..., i]`` and ``ext[..., i+1]``.

    ``ext`` carries one ghost cell on the left and at least one on the right;
    returns fluxes for faces ``i + 1/2`` with ``i = 1 .. len-2``.
    """
    iv = downwind_interval(ext[..., :-2], ext[..., 1:-1], ext[..., 2:], 1.0 / nu)
    return iv.clamp(ext[..., 2:])


def limited_downwind_axis(values: np.ndarray, nu: float, periodic: bool = True,
                          ghost=(0.0, 0.0), axis: int = -1) -> np.ndarray:
    """Limited downwind step along one axis of an array (rightward transport)."""
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if nu == 1.0:
        if periodic:
            out = np.roll(v, 1, axis=-1)
        else:
            out = np.concatenate([np.full(v.shape[:-1] + (1,), ghost[0]), v[..., :-1]], axis=-1)
        return np.moveaxis(out, -1, axis)
    n = v.shape[-1]
    if periodic:
        ext = v[..., np.arange(-2, n + 1) % n]
    else:
        ext = np.concatenate([np.full(v.shape[:-1] + (2,), ghost[0]), v,
                              np.full(v.shape[:-1] + (1,), ghost[1])], axis=-1)
    flux = limited_downwind_fluxes(ext, nu)  # faces j-1/2 for j = 0..n
    out = v - nu * np.diff(flux, axis=-1)
    return np.moveaxis(out, -1, axis)


@_mirror
def step_limited_downwind(c: CellField, nu: float) -> CellField:
    """One step of the limited downwind scheme (interval form).

    The downwind value ``c_{j+1}`` is clamped into the interval returned by
    :func:`downwind_interval`. ``nu = 1`` takes the exact-shift path.
    """
    if not 0.0 < nu <= 1.0:
        raise CFLError(f"limited downwind needs 0 < nu <= 1, got {nu}")
    out = limited_downwind_axis(c.values, nu, c.grid.periodic, c.grid.ghost)
    return c.with_values(out)


def _semi_discrete_faces(c: CellField, kind):
    ext = pad(c.values, c.grid, 2, 1)
    d = np.diff(ext)
    inc = limited_increment(kind, d[:-1], d[1:], 0.5)
    return ext, d, inc


def l2_decrease_rate(c: CellField, kind=LimiterKind.MINMOD, u: float = 1.0) -> float:
    """``d/dt sum_j c_j^2`` for the semi-discrete limited scheme (nu -> 0).

    Non-positive for any limiter with ``0 <= phi <= 1`` (minmod); superbee
    can make it positive.
    """
    kind = LimiterKind(kind)
    if kind is LimiterKind.ULTRABEE:
        raise ValueError("ultrabee has no semi-discrete limit")
    ext, d, inc = _semi_discrete_faces(c, kind)
    flux = ext[1:-1] + 0.5 * inc  # faces j-1/2, j = 0..n
    dcdt = -u * np.diff(flux) / c.grid.dx
    return float(2.0 * np.dot(c.values, dcdt))


def l2_decrease_rate_identity(c: CellField, kind=LimiterKind.MINMOD, u: float = 1.0) -> float:
    """The same rate through ``-(u/dx) sum |c_j - c_{j-1}|^2 (1 - phi_{j-1/2})``.

    Periodic grids only (the summation by parts drops boundary terms).
    """
    kind = LimiterKind(kind)
    if not c.grid.periodic:
        raise ValueError("identity holds on periodic grids only")
    ext, d, inc = _semi_discrete_faces(c, kind)
    # faces j-1/2 for j = 0..n-1: d[1:-1] is c_j - c_{j-1}; inc = phi * that
    jump = d[1:-1]
    phi_jump = inc[:-1]
    return float(-(u / c.grid.dx) * np.sum(jump * jump - jump * phi_jump))
