"""Experiment configuration, runners and reports.

An experiment is described by an :class:`ExperimentConfig` (usually parsed
from a ``key = value`` file), run by :func:`run_experiment`, and summarised
in an :class:`ExperimentReport`. Reports and CSV snapshots are written
deterministically; wall-clock time is only kept in memory so that repeated
runs give bit-identical files.
"""

from __future__ import annotations

import dataclasses
import math
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import core1d, glimm, levelset, limited, linear_schemes, twofluid, vofire
from .core1d import CellField, Grid1D
from .errors import CFLError, ConfigError, InvariantViolation
from .mesh2d import build_structured_tri_mesh

__all__ = [
    "EXPERIMENTS",
    "PRESETS",
    "ExperimentConfig",
    "ExperimentReport",
    "parse_config",
    "load_config",
    "run_experiment",
    "time_dependence_probe",
    "expected_rate",
]

EXPERIMENTS = ("advect1d", "limiters1d", "glimm1d", "levelset1d", "vofire2d",
               "split2d", "twofluid1d", "convergence")
PRESETS = ("step", "gaussian", "sinusoid", "square-indicator", "bump", "sod",
           "interface-advection")

_NAMED_LINEAR = {"upwind": (1, 0), "lax_wendroff": (2, 1), "beam_warming": (2, 0), "o3": (3, 1)}
_LIMITERS = ("minmod", "superbee", "ultrabee", "limited_downwind")

# tolerances for asserted invariants
MP_TOL = 1e-12
TV_TOL = 1e-12
MASS_TOL_1D = 1e-12
MASS_TOL_2D = 1e-12
CONS_TOL_TWOFLUID = 1e-11
EXACT_TOL = 1e-12
UNIFORM_TOL = 1e-10

_ALLOWED = {
    "advect1d": ("step", "gaussian", "sinusoid"),
    "limiters1d": ("step", "gaussian", "sinusoid"),
    "convergence": ("step", "gaussian", "sinusoid"),
    "glimm1d": ("step",),
    "levelset1d": ("step",),
    "vofire2d": ("square-indicator", "gaussian"),
    "split2d": ("square-indicator", "gaussian", "bump"),
    "twofluid1d": ("sod", "interface-advection"),
}

_DEFAULTS = {
    # scheme, preset, grids, nu, t_end
    "advect1d": ("upwind", "step", (200,), 0.5, 0.5),
    "limiters1d": ("limited_downwind", "step", (200,), 0.5, 0.5),
    "convergence": ("upwind", "step", (200, 400, 800, 1600, 3200), 0.5, 0.5),
    "glimm1d": ("glimm", "step", (512,), 0.4, None),
    "levelset1d": ("upwind", "step", (200,), 0.5, 1.0),
    "vofire2d": ("vofire", "square-indicator", (32,), 0.5, 1.0),
    "split2d": ("limited_downwind", "square-indicator", (64,), 0.4, 1.0),
    "twofluid1d": ("limited_downwind", "sod", (400,), None, None),
}


def _parse_linear(name: str):
    if name in _NAMED_LINEAR:
        return _NAMED_LINEAR[name]
    m = re.fullmatch(r"\(?\s*(\d+)\s*[,_]\s*(\d+)\s*\)?", name)
    if m:
        return int(m.group(1)), int(m.group(2))
    return None


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    ``scheme`` is a linear scheme (``upwind``, ``lax_wendroff``,
    ``beam_warming``, ``o3`` or ``"p,k"``), a limiter (``minmod``,
    ``superbee``, ``ultrabee``, ``limited_downwind``), ``glimm``, ``vofire``
    or, for ``twofluid1d``, the mass-fraction flux (``limited_downwind`` or
    ``upwind``). Fields left as ``None`` take per-experiment defaults.
    """

    experiment: str
    scheme: str | None = None
    grids: tuple[int, ...] | None = None
    nu: float | None = None
    t_end: float | None = None
    preset: str | None = None
    seed: int = 0
    out_dir: str | None = None
    sampling: str = "van_der_corput"
    velocity: tuple[float, float] = (1.0, 0.37)
    gamma1: float = 1.4
    gamma2: float = 1.4
    cv1: float = 1.0
    cv2: float = 1.0
    cfl: float = 0.9
    bc: str | None = None

    def resolved(self) -> "ExperimentConfig":
        """Copy with defaults filled in and every field validated."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}", key="experiment")
        scheme, preset, grids, nu, t_end = _DEFAULTS[self.experiment]
        cfg = dataclasses.replace(
            self,
            scheme=self.scheme if self.scheme is not None else scheme,
            preset=self.preset if self.preset is not None else preset,
            grids=tuple(self.grids) if self.grids is not None else grids,
            nu=self.nu if self.nu is not None else nu,
            t_end=self.t_end if self.t_end is not None else t_end,
        )
        if cfg.experiment == "glimm1d" and cfg.t_end is None:
            cfg.t_end = 1000 * cfg.nu / cfg.grids[0]
        if cfg.experiment == "twofluid1d":
            if cfg.t_end is None:
                cfg.t_end = 0.2 if cfg.preset == "sod" else 1.0
            if cfg.bc is None:
                cfg.bc = "transmissive" if cfg.preset == "sod" else "periodic"
        _validate(cfg)
        return cfg


def _validate(cfg: ExperimentConfig):
    if cfg.preset not in PRESETS:
        raise ConfigError(f"unknown preset {cfg.preset!r}", key="preset")
    if cfg.preset not in _ALLOWED[cfg.experiment]:
        raise ConfigError(f"preset {cfg.preset!r} not available for {cfg.experiment}", key="preset")
    exp, s = cfg.experiment, cfg.scheme
    ok = {
        "advect1d": _parse_linear(s) is not None or s in _LIMITERS,
        "convergence": _parse_linear(s) is not None or s in _LIMITERS,
        "limiters1d": s in _LIMITERS,
        "glimm1d": s == "glimm",
        "levelset1d": _parse_linear(s) is not None,
        "vofire2d": s in ("vofire", "upwind"),
        "split2d": s == "limited_downwind",
        "twofluid1d": s in ("limited_downwind", "upwind"),
    }[exp]
    if not ok:
        raise ConfigError(f"scheme {s!r} not available for {exp}", key="scheme")
    pk = _parse_linear(s)
    if pk is not None:
        try:
            linear_schemes.is_coefficients(pk[0], pk[1], 0.5)
        except ValueError as e:
            raise ConfigError(str(e), key="scheme") from None
    if not cfg.grids or any(int(n) != n or n < 4 for n in cfg.grids):
        raise ConfigError("grid sizes must be integers >= 4", key="grids")
    if exp == "convergence":
        if len(cfg.grids) < 2 or any(b <= a for a, b in zip(cfg.grids, cfg.grids[1:])):
            raise ConfigError("convergence needs at least two increasing grid sizes", key="grids")
    if exp != "twofluid1d" and not (cfg.nu is not None and 0.0 < cfg.nu <= 1.0):
        raise ConfigError(f"nu must lie in (0, 1], got {cfg.nu}", key="nu")
    if exp == "split2d" and cfg.nu >= 1.0:
        raise ConfigError("split2d needs nu < 1", key="nu")
    if not (cfg.t_end is not None and cfg.t_end > 0):
        raise ConfigError("t_end must be positive", key="t_end")
    if cfg.sampling not in ("van_der_corput", "pseudo_random"):
        raise ConfigError(f"unknown sampling {cfg.sampling!r}", key="sampling")
    if exp == "twofluid1d":
        if cfg.bc not in ("periodic", "transmissive"):
            raise ConfigError(f"unknown boundary condition {cfg.bc!r}", key="bc")
        if not 0.0 < cfg.cfl < 1.0:
            raise ConfigError("cfl must lie in (0, 1)", key="cfl")
        try:
            twofluid.GasPair(cfg.gamma1, cfg.gamma2, cfg.cv1, cfg.cv2)
        except ValueError as e:
            raise ConfigError(str(e), key="gamma1") from None
    if exp in ("vofire2d", "split2d"):
        ux, uy = cfg.velocity
        if exp == "split2d" and not (ux > 0 and uy > 0):
            raise ConfigError("split2d needs a velocity with positive components", key="velocity")
        if ux == 0 and uy == 0:
            raise ConfigError("velocity must be non-zero", key="velocity")


# ---------------------------------------------------------------------------
# Config files

def _floats(v, n=None):
    out = tuple(float(x) for x in v.replace("(", "").replace(")", "").split(","))
    if n is not None and len(out) != n:
        raise ValueError(f"expected {n} comma-separated numbers")
    return out


_KEYS = {
    "experiment": ("experiment", str),
    "scheme": ("scheme", str),
    "limiter": ("scheme", str),
    "y_flux": ("scheme", str),
    "grids": ("grids", lambda v: tuple(int(x) for x in v.split(","))),
    "n_cells": ("grids", lambda v: tuple(int(x) for x in v.split(","))),
    "nu": ("nu", float),
    "t_end": ("t_end", float),
    "preset": ("preset", str),
    "seed": ("seed", int),
    "out": ("out_dir", str),
    "out_dir": ("out_dir", str),
    "sampling": ("sampling", str),
    "velocity": ("velocity", lambda v: _floats(v, 2)),
    "gamma1": ("gamma1", float),
    "gamma2": ("gamma2", float),
    "cv1": ("cv1", float),
    "cv2": ("cv2", float),
    "cfl": ("cfl", float),
    "bc": ("bc", str),
}


def parse_config(text: str, experiment: str | None = None, **overrides) -> ExperimentConfig:
    """Parse ``key = value`` lines (``#`` starts a comment).

    ``experiment`` (e.g. from a CLI subcommand) fills in or must agree with
    the file's own ``experiment`` key. Keyword overrides win over the file.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value", key=line)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key)
        name, conv = _KEYS[key]
        try:
            values[name] = conv(val)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {val!r} for {key}", key=key) from None
    if experiment is not None:
        if values.get("experiment", experiment) != experiment:
            raise ConfigError(f"config is for {values['experiment']!r}, not {experiment!r}",
                              key="experiment")
        values["experiment"] = experiment
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "experiment" not in values:
        raise ConfigError("no experiment given", key="experiment")
    return ExperimentConfig(**values).resolved()


def load_config(path, experiment: str | None = None, **overrides) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}", key="config") from None
    return parse_config(text, experiment, **overrides)


# ---------------------------------------------------------------------------
# Report

@dataclass
class ExperimentReport:
    """Errors, orders, invariant counters and extra metrics of one run.

    ``errors`` maps ``"L1"``, ``"L2"``, ``"Linf"`` to one value per grid;
    ``eoc`` holds the L1 orders between consecutive grids. Every asserted
    invariant has an entry in ``violations``; ``failures`` keeps the first
    message (with cell/step context) for each violated one.
    """

    config: ExperimentConfig
    n_cells: list = field(default_factory=list)
    errors: dict = field(default_factory=lambda: {"L1": [], "L2": [], "Linf": []})
    eoc: list = field(default_factory=list)
    violations: dict = field(default_factory=dict)
    conservation_drift: float = 0.0
    metrics: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def check(self, name: str, failed: bool, message: str = "") -> None:
        """Register a named invariant; count and remember a failure."""
        self.violations.setdefault(name, 0)
        if failed:
            if self.violations[name] == 0:
                self.failures.append(f"{name}: {message}")
            self.violations[name] += 1

    def add_errors(self, n: int, err: dict) -> None:
        self.n_cells.append(n)
        for k in ("L1", "L2", "Linf"):
            self.errors[k].append(float(err[k]))

    def summary(self) -> str:
        cfg = self.config
        lines = [f"experiment = {cfg.experiment}"]
        for f in dataclasses.fields(cfg):
            if f.name not in ("experiment", "out_dir"):
                lines.append(f"config.{f.name} = {_fmt(getattr(cfg, f.name))}")
        lines.append(f"status = {'ok' if self.ok else 'INVARIANT FAILURE'}")
        for i, n in enumerate(self.n_cells):
            errs = ", ".join(f"{k}={_fmt(self.errors[k][i])}" for k in ("L1", "L2", "Linf"))
            lines.append(f"grid {n}: {errs}")
        if self.eoc:
            lines.append("eoc_L1 = " + ", ".join(_fmt(e) for e in self.eoc))
        lines.append(f"conservation_drift = {_fmt(self.conservation_drift)}")
        for k in sorted(self.violations):
            lines.append(f"violations.{k} = {self.violations[k]}")
        for k in sorted(self.metrics):
            lines.append(f"metric.{k} = {_fmt(self.metrics[k])}")
        lines.extend(f"failure: {m}" for m in self.failures)
        return "\n".join(lines) + "\n"


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (tuple, list)):
        return ",".join(_fmt(x) for x in v)
    if isinstance(v, (np.floating,)):
        return f"{float(v):.17g}"
    return str(v)


def _write_errors_csv(report: ExperimentReport, path: Path):
    with open(path, "w") as fh:
        fh.write("n_cells,L1,L2,Linf,eoc_L1\n")
        for i, n in enumerate(report.n_cells):
            eoc = report.eoc[i - 1] if 0 < i <= len(report.eoc) else None
            row = [str(n)] + [_fmt(report.errors[k][i]) for k in ("L1", "L2", "Linf")] + [_fmt(eoc)]
            fh.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# 1D scalar transport

def _profile(preset: str):
    if preset == "step":
        return core1d.Box(0.25, 0.75)
    if preset == "gaussian":
        return core1d.Gaussian(0.5, 0.1)
    if preset == "sinusoid":
        return core1d.Sinusoid()
    raise ConfigError(f"unknown 1D preset {preset!r}", key="preset")


def _stepper(scheme: str, nu: float):
    """Return ``(step_fn, family, order)`` for a 1D scheme name."""
    pk = _parse_linear(scheme)
    if pk is not None:
        coeffs = linear_schemes.is_coefficients(pk[0], pk[1], nu)
        return (lambda c: linear_schemes.step_linear(c, coeffs)), "linear", pk[0]
    if scheme == "limited_downwind":
        return (lambda c: limited.step_limited_downwind(c, nu)), "limiter", None
    return (lambda c: limited.step_flux_limited(c, nu, scheme)), "limiter", None


def expected_rate(order: int, smooth: bool) -> tuple[float, float]:
    """Band accepted for the last-pair L1 order of a linear order-``p`` scheme.

    Discontinuous data: ``p / (p + 1) +- 0.1``. Smooth data: ``p +- 0.1 p``.
    """
    if smooth:
        return 0.9 * order, 1.1 * order
    a = order / (order + 1)
    return a - 0.1, a + 0.1


def _errors(c: CellField, exact: CellField) -> dict:
    return {k: core1d.norm(c, exact, k) for k in ("L1", "L2", "Linf")}


def _advect_1d(cfg: ExperimentConfig, n: int, report: ExperimentReport, check_limiter: bool):
    grid = Grid1D(0.0, 1.0, n)
    f = _profile(cfg.preset)
    c = core1d.project_initial(f, grid)
    step_fn, family, order = _stepper(cfg.scheme, cfg.nu)
    n_steps = max(1, round(cfg.t_end / (cfg.nu * grid.dx)))
    m0 = c.mass()
    drift = 0.0
    tv = core1d.total_variation(c)
    for s in range(1, n_steps + 1):
        new = step_fn(c)
        drift = max(drift, abs(new.mass() - m0))
        if check_limiter and family == "limiter":
            prev = c.values
            left = np.roll(prev, 1)
            lo, hi = np.minimum(left, prev), np.maximum(left, prev)
            bad = np.flatnonzero((new.values < lo - MP_TOL) | (new.values > hi + MP_TOL))
            report.check("maximum_principle", bad.size > 0,
                         f"cell {int(bad[0])} step {s}" if bad.size else "")
            tv_new = core1d.total_variation(new)
            report.check("tv_increase", tv_new > tv + TV_TOL, f"step {s}: {tv_new!r} > {tv!r}")
            tv = tv_new
        c = new
    t = n_steps * cfg.nu * grid.dx
    exact = core1d.exact_advect_average(f, grid, 1.0, t)
    report.check("mass_conservation", drift > MASS_TOL_1D * max(1.0, abs(m0)),
                 f"drift {drift:.3e} on {n} cells")
    report.conservation_drift = max(report.conservation_drift, drift)
    return c, exact, family, order


def _run_advect(cfg, report, check_limiter=True):
    for n in cfg.grids:
        c, exact, family, order = _advect_1d(cfg, n, report, check_limiter)
        err = _errors(c, exact)
        report.add_errors(n, err)
        if cfg.nu == 1.0:
            report.check("exact_at_unit_cfl", err["Linf"] > EXACT_TOL,
                         f"Linf {err['Linf']:.3e} on {n} cells")
        if cfg.out_dir:
            core1d.write_csv(c, Path(cfg.out_dir) / f"{cfg.experiment}_n{n}.csv")
    if len(report.n_cells) >= 2:
        dxs = [1.0 / n for n in report.n_cells]
        report.eoc = core1d.estimate_eoc(report.errors["L1"], dxs)
    return family, order


def _run_convergence(cfg, report):
    family, order = _run_advect(cfg, report)
    last = report.eoc[-1]
    report.metrics["eoc_last"] = last
    if family == "linear" and cfg.nu < 1.0:
        lo, hi = expected_rate(order, smooth=cfg.preset != "step")
        report.metrics["eoc_expected_low"] = lo
        report.metrics["eoc_expected_high"] = hi
        report.check("eoc_last_pair", last is None or not lo <= last <= hi,
                     f"observed {last} outside [{lo:.3g}, {hi:.3g}]")
        if cfg.preset == "step":
            b, _ = time_dependence_probe(cfg.scheme, n_cells=cfg.grids[0], nu=cfg.nu)
            report.metrics["time_exponent"] = b
            report.metrics["time_exponent_bound"] = 1.0 / (order + 1)


def time_dependence_probe(scheme: str = "upwind", n_cells: int = 200, nu: float = 0.5,
                          horizons=(1.0, 2.0, 4.0, 8.0), preset: str = "step"):
    """Least-squares slope of ``log L1 error`` against ``log T``.

    Returns ``(exponent, errors)``; the exponent is ``None`` when every
    error is below 1e-12 (e.g. exact transport at ``nu = 1``).
    """
    grid = Grid1D(0.0, 1.0, n_cells)
    f = _profile(preset)
    step_fn, _, _ = _stepper(scheme, nu)
    c = core1d.project_initial(f, grid)
    errors = []
    done = 0
    for T in sorted(horizons):
        target = round(T / (nu * grid.dx))
        while done < target:
            c = step_fn(c)
            done += 1
        exact = core1d.exact_advect_average(f, grid, 1.0, done * nu * grid.dx)
        errors.append(core1d.norm(c, exact, "L1"))
    errors = np.array(errors)
    if np.all(errors < 1e-12):
        return None, errors.tolist()
    logs = np.log(np.maximum(errors, 1e-300))
    slope = np.polyfit(np.log(sorted(horizons)), logs, 1)[0]
    return float(slope), errors.tolist()


def _run_glimm(cfg, report):
    n = cfg.grids[0]
    grid = Grid1D(0.0, 1.0, n)
    f = _profile(cfg.preset)
    c0 = core1d.project_initial(f, grid)
    seq = glimm.SamplingSequence(cfg.sampling, cfg.seed if cfg.sampling == "pseudo_random" else None)
    n_steps = max(1, round(cfg.t_end / (cfg.nu * grid.dx)))
    allowed = np.unique(c0.values)
    c = c0
    for s in range(1, n_steps + 1):
        c = glimm.glimm_step(c, cfg.nu, next(seq))
        new_vals = ~np.isin(c.values, allowed)
        report.check("value_inclusion", bool(new_vals.any()),
                     f"cell {int(np.argmax(new_vals))} step {s}")
    drift = abs(c.mass() - c0.mass())
    report.conservation_drift = drift
    report.check("mass_conservation", drift > MASS_TOL_1D, f"drift {drift:.3e}")
    t = n_steps * cfg.nu * grid.dx
    exact = core1d.exact_advect_average(f, grid, 1.0, t)
    report.add_errors(n, _errors(c, exact))
    fronts = np.array([0.25 + t, 0.75 + t]) % 1.0
    found = levelset.extract_half_level(c)
    if found:
        d = np.abs(np.subtract.outer(np.array(found), fronts))
        d = np.minimum(d, 1.0 - d).min(axis=1)
        front_err = float(d.max())
    else:
        front_err = math.inf
    report.metrics["front_error"] = front_err
    report.metrics["front_error_in_dx"] = front_err / grid.dx
    report.metrics["n_steps"] = float(n_steps)
    if cfg.sampling == "van_der_corput":
        report.check("front_within_3dx", front_err > 3 * grid.dx,
                     f"front error {front_err / grid.dx:.3g} dx")
    if cfg.out_dir:
        core1d.write_csv(c, Path(cfg.out_dir) / f"glimm1d_n{n}.csv")


def _heaviside_grid(n):
    # the jump at x = 0 sits on a face for even n
    return Grid1D(-0.5, 1.5, n, boundary="inflow", ghost=(0.0, 1.0))


def _run_levelset(cfg, report):
    pk = _parse_linear(cfg.scheme)
    coeffs = linear_schemes.is_coefficients(pk[0], pk[1], cfg.nu)
    for n in cfg.grids:
        grid = _heaviside_grid(2 * (n // 2))
        f = core1d.Step(0.0, left=0.0, right=1.0)
        c = core1d.project_initial(f, grid)
        n_steps = int(math.floor(cfg.t_end / (cfg.nu * grid.dx) + 1e-9))
        worst = 0.0
        for s in range(1, n_steps + 1):
            c = linear_schemes.step_linear(c, coeffs)
            t = s * cfg.nu * grid.dx
            x = levelset.extract_half_level(c)
            err = min((abs(v - t) for v in x), default=math.inf)
            worst = max(worst, err)
            if cfg.scheme == "upwind" or pk == (1, 0):
                report.check("half_level_within_dx", err > grid.dx + 1e-12,
                             f"step {s}: error {err / grid.dx:.3g} dx on {grid.n_cells} cells")
        t = n_steps * cfg.nu * grid.dx
        report.add_errors(grid.n_cells, _errors(c, core1d.exact_advect_average(f, grid, 1.0, t)))
        report.metrics[f"half_level_error_in_dx_n{grid.n_cells}"] = worst / grid.dx
        if t > 0:
            params = levelset.ModifiedEqParams.from_scheme(1.0, grid.dx, cfg.nu, t)
            root = brentq(lambda x: levelset.modified_solution(x, params) - 0.5,
                          -0.5, 1.5, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            report.check("modified_half_level", abs(root - t) > 1e-12,
                         f"root {root!r} vs u t = {t!r}")
            report.metrics[f"modified_half_level_error_n{grid.n_cells}"] = abs(root - t)
        if cfg.out_dir:
            core1d.write_csv(c, Path(cfg.out_dir) / f"levelset1d_n{grid.n_cells}.csv")


# ---------------------------------------------------------------------------
# 2D transport

_SQUARE = (0.25, 0.25, 0.75, 0.75)


def mixed_cell_count(values, tol: float = 0.01) -> int:
    v = np.asarray(values)
    return int(((v > tol) & (v < 1 - tol)).sum())


def _run_vofire(cfg, report):
    n = cfg.grids[0]
    mesh = build_structured_tri_mesh(n, n)
    u = np.asarray(cfg.velocity, dtype=float)
    if cfg.preset == "square-indicator":
        c0 = vofire.project_indicator(mesh, _SQUARE)
    else:
        cx, cy = mesh.centroids[:, 0], mesh.centroids[:, 1]
        c0 = vofire.TriField(mesh, np.exp(-((cx - 0.5) ** 2 + (cy - 0.5) ** 2) / 0.02))
    dt_max = 1.0 / vofire.cfl_numbers(mesh, u, 1.0).max()
    n_steps = max(1, math.ceil(cfg.t_end / (cfg.nu * dt_max)))
    dt = cfg.t_end / n_steps
    geo = vofire.vofire_geometry(mesh, u)
    report.metrics["split_cells"] = float(geo.split.sum())

    def advance(stepper, label):
        c = c0
        m0 = c0.mass()
        drift = 0.0
        for s in range(1, n_steps + 1):
            lo, hi = vofire.upwind_bounds(mesh, c, u)
            prev_mass = c.mass()
            c = stepper(c)
            bad = np.flatnonzero((c.values < lo - MP_TOL) | (c.values > hi + MP_TOL))
            report.check(f"{label}_maximum_principle", bad.size > 0,
                         f"cell {int(bad[0])} step {s}" if bad.size else "")
            dm = abs(c.mass() - prev_mass)
            report.check(f"{label}_mass_per_step", dm > MASS_TOL_2D, f"step {s}: {dm:.3e}")
            drift = max(drift, abs(c.mass() - m0))
        return c, drift

    runs = {"upwind": lambda c: vofire.upwind_step_tri(mesh, c, u, dt)}
    if cfg.scheme == "vofire":
        runs["vofire"] = lambda c: vofire.vofire_step(mesh, c, u, dt, geometry=geo)
    results = {}
    for label, stepper in runs.items():
        results[label] = advance(stepper, label)
        report.metrics[f"mixed_cells_{label}"] = float(mixed_cell_count(results[label][0].values))
    final, drift = results[cfg.scheme]
    report.conservation_drift = drift
    if cfg.preset == "square-indicator":
        x0, y0, x1, y1 = _SQUARE
        sx, sy = u * cfg.t_end
        shifted = (x0 + sx, y0 + sy, x1 + sx, y1 + sy)
        # wrap the rectangle back into the periodic box
        shifted = (shifted[0] % 1.0, shifted[1] % 1.0,
                   shifted[0] % 1.0 + (x1 - x0), shifted[1] % 1.0 + (y1 - y0))
        exact = vofire.project_indicator(mesh, shifted).values
        d = final.values - exact
        a = mesh.areas
        report.add_errors(n, {"L1": float(np.dot(a, np.abs(d))),
                              "L2": float(math.sqrt(np.dot(a, d * d))),
                              "Linf": float(np.abs(d).max())})
    report.metrics["n_steps"] = float(n_steps)
    if cfg.out_dir:
        vofire.write_trifield_csv(final, Path(cfg.out_dir) / f"vofire2d_n{n}.csv")


def _run_split2d(cfg, report):
    n = cfg.grids[0]
    grid = Grid1D(0.0, 1.0, n)
    ux, uy = cfg.velocity
    # nu applies to the faster direction
    nu_x = cfg.nu * ux / max(ux, uy)
    nu_y = cfg.nu * uy / max(ux, uy)
    n_steps = max(1, round(cfg.t_end * max(ux, uy) / (cfg.nu * grid.dx)))
    if cfg.preset == "square-indicator":
        box = core1d.Box(0.25, 0.75)
        cx = core1d.project_initial(box, grid).values
        c = np.outer(cx, cx)
    elif cfg.preset == "bump":
        c = vofire.smooth_disk_average(n)
    else:
        x = grid.centers
        X, Y = np.meshgrid(x, x, indexing="ij")
        c = np.exp(-((X - 0.5) ** 2 + (Y - 0.5) ** 2) / 0.02)
    c0 = c
    lo, hi = c0.min(), c0.max()
    tv0 = vofire.total_variation_2d(c0)
    tv_max, tv_first = tv0, None
    m0 = c0.sum()
    drift = 0.0
    aligned = cfg.preset == "square-indicator" and n % 4 == 0
    worst_exact = 0.0
    for s in range(1, n_steps + 1):
        c = vofire.split_ultrabee_2d(c, nu_x, nu_y)
        bad = (c < lo - MP_TOL) | (c > hi + MP_TOL)
        report.check("global_bounds", bool(bad.any()), f"step {s}")
        drift = max(drift, abs(c.sum() - m0) * grid.dx ** 2)
        tv = vofire.total_variation_2d(c)
        if tv > tv0 + TV_TOL and tv_first is None:
            tv_first = s
        tv_max = max(tv_max, tv)
        if aligned:
            ex = core1d.exact_advect_average(box, grid, 1.0, s * nu_x * grid.dx).values
            ey = core1d.exact_advect_average(box, grid, 1.0, s * nu_y * grid.dx).values
            err = float(np.abs(c - np.outer(ex, ey)).max())
            worst_exact = max(worst_exact, err)
            report.check("tensor_product_exact", err > EXACT_TOL, f"step {s}: {err:.3e}")
    report.conservation_drift = drift
    report.check("mass_conservation", drift > MASS_TOL_2D, f"drift {drift:.3e}")
    report.metrics["tv_initial"] = tv0
    report.metrics["tv_max"] = tv_max
    report.metrics["tv_first_increase_step"] = None if tv_first is None else float(tv_first)
    if aligned:
        report.metrics["tensor_product_max_error"] = worst_exact
    if cfg.out_dir:
        vofire.write_cartesian_csv(c, Path(cfg.out_dir) / f"split2d_n{n}.csv")


# ---------------------------------------------------------------------------
# Two-fluid

def _run_twofluid(cfg, report):
    n = cfg.grids[0]
    dx = 1.0 / n
    gases = twofluid.GasPair(cfg.gamma1, cfg.gamma2, cfg.cv1, cfg.cv2)
    x = (np.arange(n) + 0.5) * dx
    if cfg.preset == "sod":
        state, x = twofluid.sod_state(n, gases)
    else:
        Y = ((x >= 0.25) & (x < 0.75)).astype(float)
        state = twofluid.FluidState.from_primitive(np.ones(n), np.ones(n), np.ones(n), Y, gases)
    identical = (cfg.gamma1, cfg.cv1) == (cfg.gamma2, cfg.cv2)
    periodic = cfg.bc == "periodic"
    t, s = 0.0, 0
    worst_cons = 0.0
    mixed_max = 0
    osc = 0.0
    try:
        while t < cfg.t_end * (1 - 1e-14):
            dt = min(twofluid.stable_dt(state, gases, dx, cfg.cfl), cfg.t_end - t)
            before = state.totals(dx)
            state = twofluid.step(state, gases, dt, dx, cfg.bc, cfg.scheme)
            t += dt
            s += 1
            state.check(gases)
            if periodic:
                d = float(np.abs(state.totals(dx) - before).max())
                worst_cons = max(worst_cons, d)
                report.check("conservation_per_step", d > CONS_TOL_TWOFLUID, f"step {s}: {d:.3e}")
            if cfg.preset == "interface-advection":
                Yv = state.Y
                mixed_max = max(mixed_max, int(((Yv > 1e-12) & (Yv < 1 - 1e-12)).sum()))
                P = state.pressure(gases)
                spread = max(np.ptp(state.rho), np.ptp(state.u), np.ptp(P))
                osc = max(osc, float(max(np.ptp(state.u), np.ptp(P))))
                if identical:
                    report.check("uniform_rho_u_P", spread > UNIFORM_TOL, f"step {s}: {spread:.3e}")
    except InvariantViolation as e:
        report.check("mass_fraction_bounds", True, f"step {s + 1}: {e}")
    except CFLError as e:
        report.check("cfl", True, f"step {s + 1}: {e}")
    report.check("mass_fraction_bounds", False)
    report.conservation_drift = worst_cons
    report.metrics["n_steps"] = float(s)
    report.metrics["t_final"] = t
    if cfg.preset == "sod":
        if identical and np.all(state.Y == 1.0):
            rho, _, _ = twofluid.exact_riemann_single_gas((1.0, 0.0, 1.0), (0.125, 0.0, 0.1),
                                                          cfg.gamma1, (x - 0.5) / t)
            d = state.rho - rho
            report.add_errors(n, {"L1": float(dx * np.abs(d).sum()),
                                  "L2": float(math.sqrt(dx * np.dot(d, d))),
                                  "Linf": float(np.abs(d).max())})
    else:
        report.metrics["mixed_cells_max"] = float(mixed_max)
        report.metrics["interface_oscillation"] = osc
        if identical and cfg.scheme == "limited_downwind":
            report.check("mixed_cells_at_most_2", mixed_max > 2, f"{mixed_max} mixed cells")
        grid = Grid1D(0.0, 1.0, n)
        exact = core1d.exact_advect_average(core1d.Box(0.25, 0.75), grid, 1.0, t)
        report.add_errors(n, _errors(CellField(grid, state.Y), exact))
    if cfg.out_dir:
        twofluid.write_state_csv(state, gases, x, Path(cfg.out_dir) / f"twofluid1d_n{n}.csv")


# ---------------------------------------------------------------------------

_RUNNERS = {
    "advect1d": lambda cfg, r: _run_advect(cfg, r),
    "limiters1d": lambda cfg, r: _run_advect(cfg, r),
    "convergence": _run_convergence,
    "glimm1d": _run_glimm,
    "levelset1d": _run_levelset,
    "vofire2d": _run_vofire,
    "split2d": _run_split2d,
    "twofluid1d": _run_twofluid,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run one experiment; writes ``report.txt``, ``errors.csv`` and snapshots
    into ``config.out_dir`` when it is set."""
    cfg = config.resolved()
    if cfg.out_dir:
        Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
    report = ExperimentReport(cfg)
    t0 = time.perf_counter()
    _RUNNERS[cfg.experiment](cfg, report)
    report.wall_clock = time.perf_counter() - t0
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        (out / "report.txt").write_text(report.summary())
        _write_errors_csv(report, out / "errors.csv")
    return report
