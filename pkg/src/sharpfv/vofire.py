"""Upwind and Vofire transport on triangles, plus split UltraBee on Cartesian grids.

A Vofire step has three stages:

1. cells with two downwind neighbours are cut parallel to ``u`` and given two
   reconstructed values (largest admissible transverse anti-diffusion);
2. the upwind scheme runs on the refined arrangement; no flux crosses a cut;
3. subcell values are averaged back onto the parent cells by area.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import CFLError
from .limited import limited_downwind_axis
from .mesh2d import TriMesh, face_fluxes, split_all

__all__ = [
    "TriField",
    "ReconstructedPair",
    "transverse_reconstruct",
    "cfl_numbers",
    "upwind_step_tri",
    "VofireGeometry",
    "vofire_geometry",
    "vofire_step",
    "vofire_subcell_values",
    "upwind_bounds",
    "project_indicator",
    "split_ultrabee_2d",
    "total_variation_2d",
    "smooth_disk_average",
    "write_trifield_csv",
    "write_cartesian_csv",
]


@dataclass(frozen=True)
class TriField:
    mesh: TriMesh
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.mesh.n_cells,):
            raise ValueError(f"expected {self.mesh.n_cells} values, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "TriField":
        return TriField(self.mesh, values)

    def mass(self) -> float:
        return float(np.dot(self.mesh.areas, self.values))


# ---------------------------------------------------------------------------
# Transverse reconstruction

@dataclass(frozen=True)
class ReconstructedPair:
    c_jk_R: float | np.ndarray
    c_jl_R: float | np.ndarray
    lambda_jk: float | np.ndarray
    lambda_jl: float | np.ndarray


def transverse_reconstruct(c_j, c_k, c_l, s_jk, s_jl) -> ReconstructedPair:
    """Conservative two-value reconstruction of a cut cell.

    Transverse extremum: no reconstruction. Otherwise the side whose weighted
    jump is smaller (in magnitude) takes its neighbour's value and the other
    side absorbs the remaining mass. A ratio of exactly one takes the
    ``lambda_jl = 1`` branch. Accepts scalars or arrays.
    """
    c_j, c_k, c_l, s_jk, s_jl = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (c_j, c_k, c_l, s_jk, s_jl)))
    if np.any(s_jk <= 0) or np.any(s_jl <= 0):
        raise ValueError("sub-areas must be positive")
    s_j = s_jk + s_jl
    wk = s_jk * (c_k - c_j)
    wl = s_jl * (c_l - c_j)
    extremum = wk * wl >= 0
    # ratio -wk/wl > 1  <=>  |wk| > |wl| once the signs differ
    case2 = ~extremum & (np.abs(wk) >= np.abs(wl))
    case3 = ~extremum & ~case2
    with np.errstate(divide="ignore", invalid="ignore"):
        rk2 = (s_j * c_j - s_jl * c_l) / s_jk
        rl3 = (s_j * c_j - s_jk * c_k) / s_jl
        lam_k2 = np.where(case2, (rk2 - c_j) / (c_k - c_j), 0.0)
        lam_l3 = np.where(case3, (rl3 - c_j) / (c_l - c_j), 0.0)
    c_jk = np.where(case2, rk2, np.where(case3, c_k, c_j))
    c_jl = np.where(case2, c_l, np.where(case3, rl3, c_j))
    lam_k = np.where(case2, lam_k2, np.where(case3, 1.0, 0.0))
    lam_l = np.where(case2, 1.0, np.where(case3, lam_l3, 0.0))
    if c_jk.ndim == 0:
        return ReconstructedPair(float(c_jk), float(c_jl), float(lam_k), float(lam_l))
    return ReconstructedPair(c_jk, c_jl, lam_k, lam_l)


# ---------------------------------------------------------------------------
# Upwind on triangles

def cfl_numbers(mesh: TriMesh, u, dt: float, flux=None) -> np.ndarray:
    """``dt / s_j * sum_{downwind} l (u . n)`` per cell."""
    if flux is None:
        flux = face_fluxes(mesh, u)
    return dt / mesh.areas * np.where(flux > 0, flux, 0.0).sum(axis=1)


def _check_cfl(mesh, u, dt, flux):
    nu = cfl_numbers(mesh, u, dt, flux)
    bad = np.flatnonzero(nu > 1.0 + 1e-12)
    if bad.size:
        j = int(bad[np.argmax(nu[bad])])
        raise CFLError(f"CFL violated in cell {j}: {nu[j]:.6g} > 1", cell=j)


def _upstream(mesh: TriMesh, face_values: np.ndarray, ghost: float) -> np.ndarray:
    """Value seen across every face, read from the neighbour's own face slot."""
    nb, nf = mesh.neighbor, mesh.neighbor_face
    out = np.full(nb.shape, float(ghost))
    inner = nb >= 0
    out[inner] = face_values[nb[inner], nf[inner]]
    return out


def upwind_step_tri(mesh: TriMesh, c: TriField, u, dt: float, ghost: float = 0.0) -> TriField:
    """First-order upwind step in flux form.

    Closed-boundary faces import ``ghost`` on inflow.
    """
    flux = face_fluxes(mesh, u)
    _check_cfl(mesh, u, dt, flux)
    vals = np.broadcast_to(c.values[:, None], flux.shape)
    face_val = np.where(flux > 0, vals, _upstream(mesh, np.ascontiguousarray(vals), ghost))
    new = c.values - dt / mesh.areas * (flux * face_val).sum(axis=1)
    return c.with_values(new)


def upwind_bounds(mesh: TriMesh, c: TriField, u, ghost: float = 0.0):
    """``min``/``max`` of each cell value and its upwind neighbours' values."""
    flux = face_fluxes(mesh, u)
    nb = mesh.neighbor
    nbv = np.where(nb >= 0, c.values[np.maximum(nb, 0)], ghost)
    up = np.where(flux < 0, nbv, c.values[:, None])
    return np.minimum(c.values, up.min(axis=1)), np.maximum(c.values, up.max(axis=1))


# ---------------------------------------------------------------------------
# Vofire

@dataclass(frozen=True)
class VofireGeometry:
    """Split data for every cell of a mesh and a fixed velocity."""

    flux: np.ndarray
    split: np.ndarray  # bool per cell
    face_k: np.ndarray
    face_l: np.ndarray
    face_m: np.ndarray
    s_jk: np.ndarray
    s_jl: np.ndarray
    splits: list


def vofire_geometry(mesh: TriMesh, u) -> VofireGeometry:
    flux = face_fluxes(mesh, u)
    splits = split_all(mesh, u)
    n = mesh.n_cells
    is_split = np.array([s is not None for s in splits])
    fk = np.zeros(n, dtype=int)
    fl = np.zeros(n, dtype=int)
    fm = np.zeros(n, dtype=int)
    sk = np.ones(n)
    sl = np.ones(n)
    for j, s in enumerate(splits):
        if s is not None:
            # s_jl from the partition so the two sub-areas add up to s_j exactly
            fk[j], fl[j], fm[j], sk[j] = s.face_k, s.face_l, s.face_m, s.s_jk
            sl[j] = mesh.areas[j] - s.s_jk
    return VofireGeometry(flux, is_split, fk, fl, fm, sk, sl, splits)


def _reconstructed_faces(mesh, geo, cj, ghost):
    """Outgoing value per face, with reconstructed values on split cells."""
    rows = np.flatnonzero(geo.split)
    fk, fl = geo.face_k[rows], geo.face_l[rows]
    nb = mesh.neighbor
    face_val = np.repeat(cj[:, None], 3, axis=1)
    rec = None
    if rows.size:
        ck = np.where(nb[rows, fk] >= 0, cj[np.maximum(nb[rows, fk], 0)], ghost)
        cl = np.where(nb[rows, fl] >= 0, cj[np.maximum(nb[rows, fl], 0)], ghost)
        rec = transverse_reconstruct(cj[rows], ck, cl, geo.s_jk[rows], geo.s_jl[rows])
        face_val[rows, fk] = rec.c_jk_R
        face_val[rows, fl] = rec.c_jl_R
    return rows, rec, face_val


def vofire_step(mesh: TriMesh, c: TriField, u, dt: float, ghost: float = 0.0,
                geometry: VofireGeometry | None = None) -> TriField:
    """One Vofire step: transverse reconstruction, subcell upwind, projection.

    Since no flux crosses a cut, projecting the subcell upwind values back
    onto the parent equals the flux-form update with the reconstructed values
    on the downwind faces; that form is used here (it is exactly
    conservative). :func:`vofire_subcell_values` exposes the subcell stage.
    """
    geo = vofire_geometry(mesh, u) if geometry is None else geometry
    flux = geo.flux
    _check_cfl(mesh, u, dt, flux)
    cj = c.values
    _, _, face_val = _reconstructed_faces(mesh, geo, cj, ghost)
    inflow_val = _upstream(mesh, face_val, ghost)
    out_flux = np.where(flux > 0, flux, 0.0)
    in_flux = np.where(flux < 0, flux, 0.0)
    new = cj - dt / mesh.areas * (out_flux * face_val + in_flux * inflow_val).sum(axis=1)
    return c.with_values(new)


def vofire_subcell_values(mesh: TriMesh, c: TriField, u, dt: float, ghost: float = 0.0,
                          geometry: VofireGeometry | None = None):
    """Upwind values on the two subcells of every split cell.

    Returns ``(rows, v_k, v_l)``. The inflow through the upwind face is
    shared between the subcells in proportion to their areas, which is the
    share of the face each one sees when the cut is parallel to ``u``.
    """
    geo = vofire_geometry(mesh, u) if geometry is None else geometry
    flux = geo.flux
    _check_cfl(mesh, u, dt, flux)
    rows, rec, face_val = _reconstructed_faces(mesh, geo, c.values, ghost)
    if not rows.size:
        return rows, np.zeros(0), np.zeros(0)
    inflow_val = _upstream(mesh, face_val, ghost)
    fk, fl, fm = geo.face_k[rows], geo.face_l[rows], geo.face_m[rows]
    s_j = mesh.areas[rows]
    skk, sll = geo.s_jk[rows], geo.s_jl[rows]
    fin = np.minimum(flux[rows, fm], 0.0) * inflow_val[rows, fm]  # <= 0: mass entering
    vk = rec.c_jk_R - dt / skk * (flux[rows, fk] * rec.c_jk_R + fin * skk / s_j)
    vl = rec.c_jl_R - dt / sll * (flux[rows, fl] * rec.c_jl_R + fin * sll / s_j)
    return rows, vk, vl


# ---------------------------------------------------------------------------
# Exact projection of a rectangle indicator onto triangles

def _clip(poly, axis, value, keep_greater):
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        pin = (p[axis] >= value) if keep_greater else (p[axis] <= value)
        qin = (q[axis] >= value) if keep_greater else (q[axis] <= value)
        if pin:
            out.append(p)
        if pin != qin:
            t = (value - p[axis]) / (q[axis] - p[axis])
            out.append(p + t * (q - p))
    return out


def project_indicator(mesh: TriMesh, rect, periodic_images: bool = True) -> TriField:
    """Exact cell averages of the indicator of ``rect = (x0, y0, x1, y1)``."""
    x0, y0, x1, y1 = rect
    shifts = [(0.0, 0.0)]
    if periodic_images and mesh.periodic:
        bx0, by0, bx1, by1 = mesh.periodic_box
        lx, ly = bx1 - bx0, by1 - by0
        shifts = [(a * lx, b * ly) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    vals = np.zeros(mesh.n_cells)
    for j in range(mesh.n_cells):
        tri = mesh.vertices[mesh.cells[j]]
        area = 0.0
        for sx, sy in shifts:
            poly = [p for p in tri]
            for axis, v, g in ((0, x0 + sx, True), (0, x1 + sx, False),
                               (1, y0 + sy, True), (1, y1 + sy, False)):
                poly = _clip(poly, axis, v, g)
                if len(poly) < 3:
                    break
            if len(poly) >= 3:
                area += abs(0.5 * sum(p[0] * q[1] - q[0] * p[1]
                                      for p, q in zip(poly, poly[1:] + poly[:1])))
        vals[j] = area / mesh.areas[j]
    return TriField(mesh, vals)


# ---------------------------------------------------------------------------
# Cartesian directional splitting

def split_ultrabee_2d(c, nu_x: float, nu_y: float, periodic: bool = True) -> np.ndarray:
    """x-sweep then y-sweep of the limited downwind scheme on ``c[i, j]``.

    ``i`` indexes x and ``j`` indexes y; both CFL numbers in (0, 1), with
    transport towards increasing index.
    """
    for nu in (nu_x, nu_y):
        if not 0.0 < nu < 1.0:
            raise CFLError(f"split UltraBee needs CFL numbers in (0, 1), got {nu}")
    c = np.asarray(c, dtype=float)
    if c.ndim != 2:
        raise ValueError("expected a 2D array")
    c = limited_downwind_axis(c, nu_x, periodic, axis=0)
    return limited_downwind_axis(c, nu_y, periodic, axis=1)


def smooth_disk_average(n: int, center=(0.5, 0.5), radius: float = 0.2,
                        width: float = 0.03, sub: int = 8) -> np.ndarray:
    """Cell averages on an ``n x n`` unit grid of the smooth plateau
    ``(1 - tanh((r - radius) / width)) / 2``, by ``sub x sub`` midpoint sampling."""
    s = (np.arange(n * sub) + 0.5) / (n * sub)
    X, Y = np.meshgrid(s, s, indexing="ij")
    r = np.hypot(X - center[0], Y - center[1])
    f = 0.5 * (1.0 - np.tanh((r - radius) / width))
    return f.reshape(n, sub, n, sub).mean(axis=(1, 3))


def total_variation_2d(c, periodic: bool = True) -> float:
    c = np.asarray(c, dtype=float)
    if periodic:
        return float(np.abs(np.roll(c, -1, 0) - c).sum() + np.abs(np.roll(c, -1, 1) - c).sum())
    return float(np.abs(np.diff(c, axis=0)).sum() + np.abs(np.diff(c, axis=1)).sum())


# ---------------------------------------------------------------------------
# CSV

def write_trifield_csv(f: TriField, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cell_index", "cx", "cy", "value"])
        for j, ((cx, cy), v) in enumerate(zip(f.mesh.centroids, f.values)):
            w.writerow([j, f"{cx:.17g}", f"{cy:.17g}", f"{v:.17g}"])


def write_cartesian_csv(c, path) -> None:
    c = np.asarray(c)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "value"])
        for (i, j), v in np.ndenumerate(c):
            w.writerow([i, j, f"{v:.17g}"])
