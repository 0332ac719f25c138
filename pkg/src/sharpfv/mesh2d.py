"""Triangular meshes with oriented face geometry.

Local face ``f`` of a cell joins its vertices ``f`` and ``(f + 1) % 3``;
cells are stored counter-clockwise so ``normals`` point outward. Periodic
meshes identify opposite sides of a rectangle: geometry uses the physical
vertex coordinates, only the neighbour lookup is taken modulo the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TriMesh",
    "NeighborSets",
    "SubcellSplit",
    "build_structured_tri_mesh",
    "read_mesh",
    "write_mesh",
    "face_fluxes",
    "classify_neighbors",
    "split_cell",
    "split_all",
    "polygon_area",
]

# relative threshold below which u.n is treated as exactly zero
_PARALLEL_TOL = 1e-13


def polygon_area(pts) -> float:
    """Signed shoelace area of a polygon given as an (m, 2) array."""
    p = np.asarray(pts, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


class TriMesh:
    """Triangulation with per-cell face lengths, outward normals and neighbours.

    Attributes
    ----------
    vertices : (nv, 2) array
    cells : (nc, 3) int array, counter-clockwise
    areas : (nc,) array
    face_length : (nc, 3) array
    normals : (nc, 3, 2) array of outward unit normals
    neighbor : (nc, 3) int array, -1 on a closed boundary
    neighbor_face : (nc, 3) int array, local face index seen from the neighbour
    """

    def __init__(self, vertices, cells, periodic_box=None):
        self.vertices = np.asarray(vertices, dtype=float)
        cells = np.array(cells, dtype=int)
        if cells.ndim != 2 or cells.shape[1] != 3:
            raise ValueError("cells must be an (nc, 3) index array")
        p = self.vertices[cells]
        signed = 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                        - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
        if np.any(signed == 0):
            raise ValueError(f"degenerate cell {int(np.flatnonzero(signed == 0)[0])}")
        flip = signed < 0
        cells[flip] = cells[flip][:, ::-1]
        self.cells = cells
        self.periodic_box = None if periodic_box is None else tuple(float(v) for v in periodic_box)
        self.areas = np.abs(signed)

        p = self.vertices[cells]
        edge = np.roll(p, -1, axis=1) - p  # edge f: v_f -> v_{f+1}
        self.face_length = np.hypot(edge[..., 0], edge[..., 1])
        self.normals = np.stack([edge[..., 1], -edge[..., 0]], axis=-1) / self.face_length[..., None]
        self.centroids = p.mean(axis=1)
        self._connect()

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def periodic(self) -> bool:
        return self.periodic_box is not None

    def _canon(self, idx):
        v = self.vertices[idx]
        if self.periodic_box is None:
            return (int(idx),)
        x0, y0, x1, y1 = self.periodic_box
        lx, ly = x1 - x0, y1 - y0
        fx = np.mod(v[0] - x0, lx) / lx
        fy = np.mod(v[1] - y0, ly) / ly
        key = (round(fx * 1e9) % 10**9, round(fy * 1e9) % 10**9)
        return key

    def _connect(self):
        nc = self.n_cells
        self.neighbor = np.full((nc, 3), -1, dtype=int)
        self.neighbor_face = np.full((nc, 3), -1, dtype=int)
        canon = [self._canon(i) for i in range(len(self.vertices))]
        seen = {}
        for j in range(nc):
            for f in range(3):
                a, b = self.cells[j, f], self.cells[j, (f + 1) % 3]
                ka, kb = canon[a], canon[b]
                d = self.vertices[b] - self.vertices[a]
                # endpoints coincide modulo the box on one-cell-wide meshes
                if ka > kb or (ka == kb and tuple(d) < (0.0, 0.0)):
                    ka, kb, d = kb, ka, -d
                key = (ka, kb, round(d[0] * 1e9), round(d[1] * 1e9))
                if key in seen:
                    k, g = seen.pop(key)
                    self.neighbor[j, f], self.neighbor_face[j, f] = k, g
                    self.neighbor[k, g], self.neighbor_face[k, g] = j, f
                else:
                    seen[key] = (j, f)
        if self.periodic and seen:
            raise ValueError(f"{len(seen)} unmatched faces on a periodic mesh")

    def total_area(self) -> float:
        return float(self.areas.sum())

    def closure_residual(self) -> np.ndarray:
        """Per-cell ``|sum_f l_f n_f|``; zero for closed polygons."""
        s = (self.face_length[..., None] * self.normals).sum(axis=1)
        return np.hypot(s[:, 0], s[:, 1])

    def normal_antisymmetry_residual(self) -> float:
        """``max |n_{j,k} + n_{k,j}|`` over interior faces."""
        j, f = np.nonzero(self.neighbor >= 0)
        k, g = self.neighbor[j, f], self.neighbor_face[j, f]
        return float(np.abs(self.normals[j, f] + self.normals[k, g]).max(initial=0.0))


def build_structured_tri_mesh(nx: int, ny: int, rect=(0.0, 0.0, 1.0, 1.0),
                              periodic: bool = True) -> TriMesh:
    """``nx x ny`` quads on ``rect = (x0, y0, x1, y1)``, each cut along the
    same diagonal (lower-left to upper-right) into two triangles."""
    if nx < 1 or ny < 1:
        raise ValueError("need nx, ny >= 1")
    x0, y0, x1, y1 = (float(v) for v in rect)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("degenerate rectangle")
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    def vid(i, j):
        return i * (ny + 1) + j

    cells = []
    for i in range(nx):
        for j in range(ny):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            cells.append((a, b, c))
            cells.append((a, c, d))
    return TriMesh(vertices, cells, (x0, y0, x1, y1) if periodic else None)


def read_mesh(path, periodic_box=None) -> TriMesh:
    """Read ``V x y`` / ``T i j k`` lines (0-based vertex indices)."""
    verts, tris = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "V" and len(parts) == 3:
                verts.append((float(parts[1]), float(parts[2])))
            elif parts[0] == "T" and len(parts) == 4:
                tris.append(tuple(int(v) for v in parts[1:]))
            else:
                raise ValueError(f"{path}:{lineno}: cannot parse {line.strip()!r}")
    return TriMesh(verts, tris, periodic_box)


def write_mesh(mesh: TriMesh, path) -> None:
    with open(path, "w") as fh:
        for x, y in mesh.vertices:
            fh.write(f"V {x:.17g} {y:.17g}\n")
        for a, b, c in mesh.cells:
            fh.write(f"T {a} {b} {c}\n")


# ---------------------------------------------------------------------------
# Velocity-dependent classification

def face_fluxes(mesh: TriMesh, u) -> np.ndarray:
    """``l_{j,f} (u . n_{j,f})`` per cell and local face; tiny values snapped to 0."""
    u = np.asarray(u, dtype=float)
    un = mesh.normals @ u
    un[np.abs(un) <= _PARALLEL_TOL * np.linalg.norm(u)] = 0.0
    return mesh.face_length * un


@dataclass
class NeighborSets:
    """Per-cell upwind (N-) and downwind (N+) neighbour lists."""

    flux: np.ndarray
    upwind: list
    downwind: list

    @property
    def up_mask(self):
        return self.flux < 0

    @property
    def down_mask(self):
        return self.flux > 0


def classify_neighbors(mesh: TriMesh, u) -> NeighborSets:
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        raise ValueError("velocity must be non-zero")
    flux = face_fluxes(mesh, u)
    up = [mesh.neighbor[j, flux[j] < 0].tolist() for j in range(mesh.n_cells)]
    down = [mesh.neighbor[j, flux[j] > 0].tolist() for j in range(mesh.n_cells)]
    return NeighborSets(flux, up, down)


@dataclass(frozen=True)
class SubcellSplit:
    """Cut of cell ``j`` by the segment through the apex of its two downwind faces.

    ``face_k``/``face_l`` are local face indices towards downwind neighbours
    ``k``/``l``; ``face_m`` faces the upwind neighbour ``m``. ``apex`` is the
    common vertex of the downwind faces, ``foot`` the end of the cut on the
    upwind face, ``foot_fraction`` the position of ``foot`` along that face
    measured from the vertex shared with ``face_k``.
    """

    j: int
    k: int
    l: int
    m: int
    face_k: int
    face_l: int
    face_m: int
    s_jk: float
    s_jl: float
    cut_length: float
    apex: tuple
    foot: tuple
    foot_fraction: float
    identity_residual: float


def split_cell(mesh: TriMesh, j: int, u, flux=None) -> SubcellSplit | None:
    """Transverse split of cell ``j``; ``None`` unless it has two downwind faces."""
    u = np.asarray(u, dtype=float)
    if flux is None:
        flux = face_fluxes(mesh, u)[j]
    down = np.flatnonzero(flux > 0)
    if len(down) != 2:
        return None
    fk, fl = int(down[0]), int(down[1])
    fm = 3 - fk - fl
    # faces fk and fl share the vertex not on face fm, i.e. vertex (fm + 2) % 3
    verts = mesh.vertices[mesh.cells[j]]
    ia = (fm + 2) % 3
    apex = verts[ia]
    # endpoint of face fk (resp. fl) other than the apex
    a = verts[fk if fk != ia else (fk + 1) % 3]
    b = verts[fl if fl != ia else (fl + 1) % 3]
    # apex - t u = a + s (b - a)
    M = np.column_stack([u, b - a])
    t, s = np.linalg.solve(M, apex - a)
    s = min(max(s, 0.0), 1.0)
    foot = a + s * (b - a)
    cut = float(np.hypot(*(apex - foot)))
    s_j = mesh.areas[j]
    if cut < 1e-12 * np.sqrt(s_j):
        return None
    s_jk = abs(polygon_area([apex, a, foot]))
    s_jl = abs(polygon_area([apex, foot, b]))
    unorm = float(np.linalg.norm(u))
    predicted = cut / (2 * unorm) * flux[fk]
    residual = abs(s_jk - predicted) / s_j
    nb = mesh.neighbor[j]
    return SubcellSplit(j, int(nb[fk]), int(nb[fl]), int(nb[fm]), fk, fl, fm,
                        s_jk, s_jl, cut, tuple(apex), tuple(foot), float(s), float(residual))


def split_all(mesh: TriMesh, u) -> list:
    """``split_cell`` for every cell (entries are ``None`` for unsplit cells)."""
    flux = face_fluxes(mesh, u)
    return [split_cell(mesh, j, u, flux[j]) for j in range(mesh.n_cells)]
