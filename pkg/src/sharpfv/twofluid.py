"""Two-component compressible flow with a Dalton-law mixture, 1D Lagrange-remap.

Conserved variables per cell are ``(rho, rho Y, rho u, rho E)``. A step is a
Lagrangian update (acoustic Godunov face solver, ``Y`` frozen) followed by a
conservative remap onto the fixed grid. The remap uses the upwind density
flux and, for the mass fraction, the downwind value clamped into an interval
that keeps ``Y`` inside the upwind bounds.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import CFLError, InvariantViolation, VacuumError
from .limited import FluxInterval

__all__ = [
    "GasPair",
    "FluidState",
    "RemapContext",
    "mixture_pressure",
    "sound_speed",
    "stable_dt",
    "lagrange_step",
    "y_flux_bounds",
    "remap_step",
    "step",
    "run",
    "star_state",
    "exact_riemann_single_gas",
    "sod_state",
    "write_state_csv",
]

_Y_TOL = 1e-12


@dataclass(frozen=True)
class GasPair:
    gamma_1: float = 1.4
    gamma_2: float = 1.4
    cv_1: float = 1.0
    cv_2: float = 1.0

    def __post_init__(self):
        if self.gamma_1 <= 1 or self.gamma_2 <= 1:
            raise ValueError("ratios of specific heats must exceed 1")
        if self.cv_1 <= 0 or self.cv_2 <= 0:
            raise ValueError("specific heats must be positive")

    def gamma_minus_one(self, Y):
        """Dalton coefficient ``P / (rho e)`` at mass fraction ``Y``."""
        Y = np.asarray(Y, dtype=float)
        num = Y * (self.gamma_1 - 1) * self.cv_1 + (1 - Y) * (self.gamma_2 - 1) * self.cv_2
        den = Y * self.cv_1 + (1 - Y) * self.cv_2
        return num / den


def _check_fraction(Y):
    Y = np.asarray(Y, dtype=float)
    if np.any(Y < -_Y_TOL) or np.any(Y > 1 + _Y_TOL) or not np.all(np.isfinite(Y)):
        bad = int(np.flatnonzero((Y < -_Y_TOL) | (Y > 1 + _Y_TOL) | ~np.isfinite(Y))[0]) if Y.ndim else None
        raise InvariantViolation("mass fraction outside [0, 1]", cell=bad)


def mixture_pressure(rho, e, Y, gases: GasPair):
    """Dalton-law pressure ``[sum Y_k (g_k - 1) cv_k / sum Y_k cv_k] rho e``."""
    rho = np.asarray(rho, dtype=float)
    e = np.asarray(e, dtype=float)
    if np.any(rho <= 0) or np.any(e <= 0):
        raise ValueError("density and internal energy must be positive")
    _check_fraction(Y)
    out = gases.gamma_minus_one(Y) * rho * e
    return out if np.ndim(out) else float(out)


def sound_speed(rho, P, Y, gases: GasPair):
    g = 1.0 + gases.gamma_minus_one(Y)
    return np.sqrt(g * np.asarray(P) / np.asarray(rho))


@dataclass
class FluidState:
    """Conserved variables on ``n`` cells."""

    rho: np.ndarray
    rhoY: np.ndarray
    rhoU: np.ndarray
    rhoE: np.ndarray

    def __post_init__(self):
        for name in ("rho", "rhoY", "rhoU", "rhoE"):
            setattr(self, name, np.array(getattr(self, name), dtype=float))
        n = self.rho.shape
        if any(getattr(self, k).shape != n for k in ("rhoY", "rhoU", "rhoE")):
            raise ValueError("conserved arrays differ in length")

    @classmethod
    def from_primitive(cls, rho, u, P, Y, gases: GasPair) -> "FluidState":
        rho, u, P, Y = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (rho, u, P, Y)))
        e = P / (gases.gamma_minus_one(Y) * rho)
        return cls(rho, rho * Y, rho * u, rho * (e + 0.5 * u * u))

    def __len__(self):
        return len(self.rho)

    @property
    def Y(self):
        return self.rhoY / self.rho

    @property
    def u(self):
        return self.rhoU / self.rho

    @property
    def e(self):
        u = self.u
        return self.rhoE / self.rho - 0.5 * u * u

    def pressure(self, gases: GasPair):
        return mixture_pressure(self.rho, self.e, self.Y, gases)

    def totals(self, dx: float) -> np.ndarray:
        return dx * np.array([self.rho.sum(), self.rhoY.sum(), self.rhoU.sum(), self.rhoE.sum()])

    def check(self, gases: GasPair):
        """Raise :class:`InvariantViolation` unless rho, e, P > 0 and Y in [0, 1]."""
        for name, arr in (("density", self.rho), ("internal energy", self.e)):
            bad = np.flatnonzero(~(arr > 0))
            if bad.size:
                raise InvariantViolation(f"non-positive {name}", cell=int(bad[0]))
        _check_fraction(self.Y)


def _pad(a, bc, g=2):
    if bc == "periodic":
        n = len(a)
        return a[np.arange(-g, n + g) % n]
    if bc == "transmissive":
        return np.concatenate([np.full(g, a[0]), a, np.full(g, a[-1])])
    raise ValueError(f"unknown boundary condition {bc!r}")


def stable_dt(state: FluidState, gases: GasPair, dx: float, cfl: float = 0.9) -> float:
    """``cfl * dx / max(|u| + c)``."""
    c = sound_speed(state.rho, state.pressure(gases), state.Y, gases)
    return cfl * dx / float(np.max(np.abs(state.u) + c))


@dataclass
class RemapContext:
    """Lagrange-step output on the grid padded by two ghost cells per side.

    Cell arrays have length ``n + 4`` (padded index ``p = j + 2``); entries at
    ``p = 0`` and ``p = n + 3`` are not updated by the Lagrange step.
    ``u_face[q]`` is the velocity of the face between padded cells ``q`` and
    ``q + 1``. ``length_lag`` is the Lagrangian cell width.
    """

    dx: float
    dt: float
    n: int
    rho: np.ndarray
    Y: np.ndarray
    rho_lag: np.ndarray
    u_lag: np.ndarray
    E_lag: np.ndarray
    length_lag: np.ndarray
    u_face: np.ndarray
    p_face: np.ndarray = field(repr=False)

    @property
    def Y_lag(self):
        return self.Y


def lagrange_step(state: FluidState, gases: GasPair, dt: float, dx: float,
                  bc: str = "periodic") -> RemapContext:
    """Lagrangian update with the acoustic face solver.

    ``u* = (uL + uR)/2 - (PR - PL)/(2 Z)``, ``P* = (PL + PR)/2 - Z (uR - uL)/2``
    where ``Z`` is the arithmetic mean of the acoustic impedances.
    """
    n = len(state)
    rho = _pad(state.rho, bc)
    u = _pad(state.u, bc)
    E = _pad(state.rhoE / state.rho, bc)
    Y = _pad(state.Y, bc)
    P = _pad(state.pressure(gases), bc)
    c = sound_speed(rho, P, Y, gases)
    acoustic = dt * float(np.max(np.abs(u) + c)) / dx
    if acoustic > 1.0:
        raise CFLError(f"acoustic CFL {acoustic:.6g} > 1")

    Z = rho * c
    Zf = 0.5 * (Z[:-1] + Z[1:])
    us = 0.5 * (u[:-1] + u[1:]) - (P[1:] - P[:-1]) / (2 * Zf)
    ps = 0.5 * (P[:-1] + P[1:]) - 0.5 * Zf * (u[1:] - u[:-1])

    lam = dt / (rho[1:-1] * dx)
    tau_lag = np.full_like(rho, np.nan)
    u_lag = np.full_like(rho, np.nan)
    E_lag = np.full_like(rho, np.nan)
    tau_lag[1:-1] = 1.0 / rho[1:-1] + lam * (us[1:] - us[:-1])
    u_lag[1:-1] = u[1:-1] - lam * (ps[1:] - ps[:-1])
    E_lag[1:-1] = E[1:-1] - lam * (ps[1:] * us[1:] - ps[:-1] * us[:-1])
    inner = slice(1, -1)
    e_lag = E_lag[inner] - 0.5 * u_lag[inner] ** 2
    bad = np.flatnonzero(~(tau_lag[inner] > 0) | ~(e_lag > 0))
    if bad.size:
        raise InvariantViolation("Lagrange step produced non-positive volume or energy",
                                 cell=int(bad[0]) - 1)
    rho_lag = 1.0 / tau_lag
    length = dx * rho * tau_lag
    return RemapContext(dx, dt, n, rho, Y, rho_lag, u_lag, E_lag, length, us, ps)


def y_flux_bounds(Y_jm1, Y_j, Y_jp1, Y_jp2, u_jmh, u_jph, u_jp3h, dt, dx,
                  length_j=None, length_jp1=None) -> FluxInterval:
    """Interval ``[omega, Omega]`` for the mass-fraction flux at face j+1/2.

    For ``u_{j+1/2} > 0`` and ``u_{j-1/2} > 0`` the bounds are
    ``Y_j + (M - Y_j)(1 - L/(u dt))`` and ``Y_j + (m - Y_j)(1 - L/(u dt))``
    with ``M, m`` the max/min of ``Y_{j-1}, Y_j``; the mirror image holds for
    ``u < 0``. Outflow on both sides of the upwind cell pins the flux to the
    upwind value. ``L`` is the upwind cell's Lagrangian width (``dx`` if not
    given); with ``L = dx`` this is the constant-density form.
    Inputs may be arrays.
    """
    Y_jm1, Y_j, Y_jp1, Y_jp2, u_jmh, u_jph, u_jp3h = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (Y_jm1, Y_j, Y_jp1, Y_jp2, u_jmh, u_jph, u_jp3h)))
    if np.any(np.abs(u_jph) * dt / dx >= 1.0):
        raise CFLError("remap CFL |u| dt / dx < 1 violated")
    Lj = dx if length_j is None else np.asarray(length_j, dtype=float)
    Lj1 = dx if length_jp1 is None else np.asarray(length_jp1, dtype=float)
    m_face = np.minimum(Y_j, Y_jp1)
    M_face = np.maximum(Y_j, Y_jp1)

    pos = u_jph > 0
    neg = u_jph < 0
    # only the branch matching the sign of u_{j+1/2} is kept; guard u = 0
    safe_u = np.where(u_jph == 0, 1.0, u_jph)
    fac_pos = 1.0 - Lj / (safe_u * dt)
    fac_neg = 1.0 + Lj1 / (safe_u * dt)
    if np.any(pos & (fac_pos > 0)) or np.any(neg & (fac_neg > 0)):
        raise CFLError("remap CFL violated with respect to the Lagrangian cell width")

    M_left, m_left = np.maximum(Y_jm1, Y_j), np.minimum(Y_jm1, Y_j)
    M_right, m_right = np.maximum(Y_jp1, Y_jp2), np.minimum(Y_jp1, Y_jp2)
    d_pos = np.where(u_jmh > 0, Y_j + (M_left - Y_j) * fac_pos, Y_j)
    D_pos = np.where(u_jmh > 0, Y_j + (m_left - Y_j) * fac_pos, Y_j)
    d_neg = np.where(u_jp3h < 0, Y_jp1 + (M_right - Y_jp1) * fac_neg, Y_jp1)
    D_neg = np.where(u_jp3h < 0, Y_jp1 + (m_right - Y_jp1) * fac_neg, Y_jp1)
    d = np.where(pos, d_pos, np.where(neg, d_neg, Y_j))
    D = np.where(pos, D_pos, np.where(neg, D_neg, Y_j))
    lo = np.maximum(m_face, np.minimum(d, D))
    hi = np.minimum(M_face, np.maximum(d, D))
    if lo.ndim == 0:
        return FluxInterval(float(lo), float(hi))
    return FluxInterval(lo, hi)


def remap_step(ctx: RemapContext, y_flux: str = "limited_downwind",
               check: bool = True) -> FluidState:
    """Conservative remap of the Lagrange values onto the Eulerian grid.

    Density, momentum and energy use upwind Lagrange values at each face;
    ``y_flux`` selects ``"limited_downwind"`` or plain ``"upwind"`` for the
    mass fraction. With ``check`` the produced ``Y`` is verified against the
    upwind stencil bounds.
    """
    n, dt, dx = ctx.n, ctx.dt, ctx.dx
    q = np.arange(1, n + 2)  # faces j+1/2 for j = -1..n-1, between padded q and q+1
    uf = ctx.u_face[q]
    if np.any(np.abs(uf) * dt / dx >= 1.0):
        raise CFLError("remap CFL |u| dt / dx < 1 violated")
    pos = uf > 0
    up = np.where(pos, q, q + 1)
    mass_flux = ctx.rho_lag[up] * uf

    Y = ctx.Y
    if y_flux == "upwind":
        Yf = Y[up]
    elif y_flux == "limited_downwind":
        iv = y_flux_bounds(Y[q - 1], Y[q], Y[q + 1], Y[q + 2],
                           ctx.u_face[q - 1], uf, ctx.u_face[q + 1], dt, dx,
                           ctx.length_lag[q], ctx.length_lag[q + 1])
        Yf = iv.clamp(np.where(pos, Y[q + 1], Y[q]))
    else:
        raise ValueError(f"unknown Y flux {y_flux!r}")

    cells = slice(2, n + 2)
    rho_n = ctx.rho[cells]
    k = dt / dx
    rho = rho_n - k * np.diff(mass_flux)
    rhoY = rho_n * Y[cells] - k * np.diff(mass_flux * Yf)
    rhoU = rho_n * ctx.u_lag[cells] - k * np.diff(mass_flux * ctx.u_lag[up])
    rhoE = rho_n * ctx.E_lag[cells] - k * np.diff(mass_flux * ctx.E_lag[up])
    out = FluidState(rho, rhoY, rhoU, rhoE)

    if check:
        Yn = out.Y
        Yc = Y[cells]
        lo, hi = Yc.copy(), Yc.copy()
        from_left = uf[:-1] > 0
        from_right = uf[1:] < 0
        Yl, Yr = Y[1:n + 1], Y[3:n + 3]
        lo = np.where(from_left, np.minimum(lo, Yl), lo)
        hi = np.where(from_left, np.maximum(hi, Yl), hi)
        lo = np.where(from_right, np.minimum(lo, Yr), lo)
        hi = np.where(from_right, np.maximum(hi, Yr), hi)
        bad = np.flatnonzero((Yn < lo - _Y_TOL) | (Yn > hi + _Y_TOL))
        if bad.size:
            raise InvariantViolation("mass fraction left its upwind bounds", cell=int(bad[0]))
    return out


def step(state: FluidState, gases: GasPair, dt: float, dx: float, bc: str = "periodic",
         y_flux: str = "limited_downwind", check: bool = True) -> FluidState:
    return remap_step(lagrange_step(state, gases, dt, dx, bc), y_flux, check)


def run(state: FluidState, gases: GasPair, dx: float, t_end: float, cfl: float = 0.9,
        bc: str = "periodic", y_flux: str = "limited_downwind", callback=None):
    """Advance to ``t_end`` with ``dt = cfl dx / max(|u| + c)``; returns (state, n_steps)."""
    t, nstep = 0.0, 0
    while t < t_end * (1 - 1e-14):
        dt = min(stable_dt(state, gases, dx, cfl), t_end - t)
        state = step(state, gases, dt, dx, bc, y_flux)
        t += dt
        nstep += 1
        if callback is not None:
            callback(nstep, t, state)
    return state, nstep


def sod_state(n: int, gases: GasPair | None = None, x0: float = 0.5,
              left=(1.0, 0.0, 1.0), right=(0.125, 0.0, 0.1), Y=(1.0, 1.0)):
    """Shock-tube data on ``[0, 1]``: ``(rho, u, P)`` left/right of ``x0``."""
    gases = gases or GasPair()
    x = (np.arange(n) + 0.5) / n
    L = x < x0
    prim = [np.where(L, a, b) for a, b in zip(left, right)]
    Yv = np.where(L, Y[0], Y[1])
    return FluidState.from_primitive(prim[0], prim[1], prim[2], Yv, gases), x


# ---------------------------------------------------------------------------
# Exact Riemann solver for a single perfect gas

def _pressure_function(p, rho, P, c, g):
    if p > P:
        A = 2.0 / ((g + 1) * rho)
        B = (g - 1) / (g + 1) * P
        sq = np.sqrt(A / (p + B))
        return (p - P) * sq, sq * (1 - 0.5 * (p - P) / (p + B))
    r = p / P
    f = 2 * c / (g - 1) * (r ** ((g - 1) / (2 * g)) - 1)
    df = 1.0 / (rho * c) * r ** (-(g + 1) / (2 * g))
    return f, df


def star_state(left, right, gamma: float, tol: float = 1e-12, max_iter: int = 100):
    """Star-region pressure and velocity ``(p*, u*)`` by Newton iteration."""
    rl, ul, pl = left
    rr, ur, pr = right
    if min(rl, rr, pl, pr) <= 0:
        raise ValueError("density and pressure must be positive")
    g = gamma
    cl, cr = np.sqrt(g * pl / rl), np.sqrt(g * pr / rr)
    if 2 * (cl + cr) / (g - 1) <= ur - ul:
        raise VacuumError("initial data generate vacuum")
    # two-rarefaction guess, clipped away from zero
    z = (g - 1) / (2 * g)
    p = ((cl + cr - 0.5 * (g - 1) * (ur - ul)) / (cl / pl ** z + cr / pr ** z)) ** (1 / z)
    p = max(p, 1e-8 * min(pl, pr))
    for _ in range(max_iter):
        fl, dfl = _pressure_function(p, rl, pl, cl, g)
        fr, dfr = _pressure_function(p, rr, pr, cr, g)
        p_new = p - (fl + fr + ur - ul) / (dfl + dfr)
        if p_new <= 0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * 0.5 * (p_new + p):
            p = p_new
            break
        p = p_new
    else:
        raise RuntimeError("star pressure iteration did not converge")
    fl, _ = _pressure_function(p, rl, pl, cl, g)
    fr, _ = _pressure_function(p, rr, pr, cr, g)
    return p, 0.5 * (ul + ur) + 0.5 * (fr - fl)


def exact_riemann_single_gas(left, right, gamma: float, xi):
    """Self-similar solution ``(rho, u, P)`` sampled at ``xi = x / t``."""
    rl, ul, pl = left
    rr, ur, pr = right
    g = gamma
    ps, us = star_state(left, right, gamma)
    cl, cr = np.sqrt(g * pl / rl), np.sqrt(g * pr / rr)
    gm = (g - 1) / (g + 1)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    P = np.empty_like(xi)
    for i, s in enumerate(xi):
        if s <= us:
            if ps > pl:  # left shock
                sl = ul - cl * np.sqrt((g + 1) / (2 * g) * ps / pl + (g - 1) / (2 * g))
                if s <= sl:
                    rho[i], u[i], P[i] = rl, ul, pl
                else:
                    rho[i] = rl * (ps / pl + gm) / (gm * ps / pl + 1)
                    u[i], P[i] = us, ps
            else:  # left rarefaction
                cs = cl * (ps / pl) ** ((g - 1) / (2 * g))
                head, tail = ul - cl, us - cs
                if s <= head:
                    rho[i], u[i], P[i] = rl, ul, pl
                elif s >= tail:
                    rho[i] = rl * (ps / pl) ** (1 / g)
                    u[i], P[i] = us, ps
                else:
                    f = 2 / (g + 1) + gm / cl * (ul - s)
                    rho[i] = rl * f ** (2 / (g - 1))
                    u[i] = 2 / (g + 1) * (cl + 0.5 * (g - 1) * ul + s)
                    P[i] = pl * f ** (2 * g / (g - 1))
        else:
            if ps > pr:  # right shock
                sr = ur + cr * np.sqrt((g + 1) / (2 * g) * ps / pr + (g - 1) / (2 * g))
                if s >= sr:
                    rho[i], u[i], P[i] = rr, ur, pr
                else:
                    rho[i] = rr * (ps / pr + gm) / (gm * ps / pr + 1)
                    u[i], P[i] = us, ps
            else:  # right rarefaction
                cs = cr * (ps / pr) ** ((g - 1) / (2 * g))
                head, tail = ur + cr, us + cs
                if s >= head:
                    rho[i], u[i], P[i] = rr, ur, pr
                elif s <= tail:
                    rho[i] = rr * (ps / pr) ** (1 / g)
                    u[i], P[i] = us, ps
                else:
                    f = 2 / (g + 1) - gm / cr * (ur - s)
                    rho[i] = rr * f ** (2 / (g - 1))
                    u[i] = 2 / (g + 1) * (-cr + 0.5 * (g - 1) * ur + s)
                    P[i] = pr * f ** (2 * g / (g - 1))
    return rho, u, P


def write_state_csv(state: FluidState, gases: GasPair, x, path) -> None:
    P = state.pressure(gases)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "rho", "Y", "u", "P", "e"])
        for row in zip(x, state.rho, state.Y, state.u, P, state.e):
            w.writerow([f"{v:.17g}" for v in row])
