"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

The lines are printed by each test (visible with ``-s``) and collected in
the terminal summary by ``conftest.py``.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from sharpfv.core1d import Box, CellField, Grid1D, exact_advect_average, project_initial, total_variation
from sharpfv.errors import InvariantViolation
from sharpfv.glimm import SamplingSequence, glimm_expectation, glimm_step
from sharpfv.harness import ExperimentConfig, run_experiment
from sharpfv.levelset import ModifiedEqParams, modified_solution
from sharpfv.limited import (l2_decrease_rate, step_flux_limited, step_flux_limited_ratio,
                             step_limited_downwind)
from sharpfv.linear_schemes import (is_coefficients, is_stable_pair, max_amplification,
                                    step_linear, upwind)
from sharpfv.mesh2d import build_structured_tri_mesh
from sharpfv.twofluid import (FluidState, GasPair, exact_riemann_single_gas, run, sod_state,
                              stable_dt, step)
from sharpfv.vofire import (TriField, cfl_numbers, project_indicator, smooth_disk_average,
                            split_ultrabee_2d, total_variation_2d, transverse_reconstruct,
                            upwind_bounds, upwind_step_tri, vofire_geometry, vofire_step)

SEED = 20240611


def _verdict(number, title, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, detail


def _field(v, **kw):
    v = np.asarray(v, dtype=float)
    return CellField(Grid1D(0.0, 1.0, len(v), **kw), v)


@pytest.mark.criterion(1, "upwind, Lax-Wendroff and Beam-Warming weights")
def test_coefficient_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for nu in np.linspace(0.02, 0.98, 20):
        closed = {
            (1, 0): [nu, 1 - nu],
            (2, 1): [(nu * nu + nu) / 2, 1 - nu * nu, (nu * nu - nu) / 2],
            (2, 0): [(nu * nu - nu) / 2, 2 * nu - nu * nu, (nu - 1) * (nu - 2) / 2],
        }
        for (p, k), ref in closed.items():
            worst = max(worst, float(np.abs(is_coefficients(p, k, nu).alphas - ref).max()))
    elapsed = time.perf_counter() - t0
    _verdict(1, "upwind, Lax-Wendroff and Beam-Warming weights",
             worst <= 1e-12 and elapsed < 1.0, f"max error {worst:.2e}, {elapsed:.3f} s")


@pytest.mark.criterion(2, "L1 convergence rates")
def test_convergence_rates():
    t0 = time.perf_counter()
    coarse = (200, 400, 800, 1600, 3200)
    smooth = (64, 128, 256, 512, 1024)
    cases = [("upwind", "step", coarse, 0.40, 0.60), ("3,1", "step", coarse, 0.65, 0.85),
             ("2,1", "sinusoid", smooth, 1.8, 2.2), ("3,1", "sinusoid", smooth, 2.7, 3.3)]
    ok, parts = True, []
    for scheme, preset, grids, lo, hi in cases:
        rep = run_experiment(ExperimentConfig("convergence", scheme=scheme, preset=preset,
                                              grids=grids, nu=0.5))
        last = rep.eoc[-1]
        ok &= lo <= last <= hi
        parts.append(f"{scheme}/{preset} {last:.3f}")
    elapsed = time.perf_counter() - t0
    _verdict(2, "L1 convergence rates", ok and elapsed < 60, ", ".join(parts) + f", {elapsed:.1f} s")


@pytest.mark.criterion(3, "von Neumann stability screen")
def test_stability_screen():
    worst = 0.0
    for p in range(1, 8):
        for k in range(p + 1):
            if not is_stable_pair(p, k):
                continue
            for nu in np.arange(1, 10) / 10:
                worst = max(worst, max_amplification(is_coefficients(p, k, nu), 1024))
    witness = max(max_amplification(is_coefficients(3, 0, nu), 1024) for nu in np.arange(1, 10) / 10)
    _verdict(3, "von Neumann stability screen", worst <= 1 + 1e-12 and witness > 1.001,
             f"stable max |g| {worst:.15f}, (3,0) max |g| {witness:.4f}")


@pytest.mark.criterion(4, "maximum principle and TVD")
def test_maximum_principle_tvd():
    rng = np.random.default_rng(SEED)
    violations = {"minmod": 0, "superbee": 0, "limited_downwind": 0}
    for kind in violations:
        for _ in range(10_000):
            n = int(rng.integers(4, 33))
            c = _field(rng.uniform(-2, 2, n))
            nu = float(rng.uniform(0.01, 0.99))
            new = step_limited_downwind(c, nu) if kind == "limited_downwind" else step_flux_limited(c, nu, kind)
            left = np.roll(c.values, 1)
            lo, hi = np.minimum(left, c.values), np.maximum(left, c.values)
            bad = np.any(new.values < lo - 1e-12) or np.any(new.values > hi + 1e-12)
            bad |= total_variation(new) > total_variation(c) + 1e-12
            violations[kind] += int(bad)
    _verdict(4, "maximum principle and TVD", sum(violations.values()) == 0, str(violations))


@pytest.mark.criterion(5, "limited downwind step exactness")
def test_step_exactness():
    grid = Grid1D(0.0, 1.0, 256)
    box = Box(0.25, 0.75)
    worst = 0.0
    for nu in (0.25, 0.4, 0.5, 0.75):
        c = project_initial(box, grid)
        for _ in range(1000):
            c = step_limited_downwind(c, nu)
        exact = exact_advect_average(box, grid, 1.0, 1000 * nu * grid.dx)
        worst = max(worst, grid.dx * float(np.abs(c.values - exact.values).sum()))
    _verdict(5, "limited downwind step exactness", worst <= 1e-12, f"max L1 error {worst:.2e}")


@pytest.mark.criterion(6, "UltraBee equals limited downwind")
def test_ultrabee_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for i in range(1000):
        n = int(rng.integers(4, 33))
        jumps = rng.uniform(0.05, 1.0, n)
        if i % 2:
            jumps *= rng.choice([-1.0, 1.0], n)
        v = np.cumsum(jumps)
        # strictly monotone interior; the wrap-around jump is nonzero too
        c = _field(v)
        nu = float(rng.uniform(0.02, 0.98))
        a = step_flux_limited_ratio(c, nu, "ultrabee").values
        b = step_limited_downwind(c, nu).values
        worst = max(worst, float(np.abs(a - b).max()))
    _verdict(6, "UltraBee equals limited downwind", worst <= 1e-13, f"max difference {worst:.2e}")


@pytest.mark.criterion(7, "L2 monotonicity of minmod, superbee witness")
def test_l2_monotonicity():
    rng = np.random.default_rng(SEED)
    worst = -math.inf
    for _ in range(10_000):
        c = _field(rng.uniform(-1, 1, int(rng.integers(4, 33))))
        rate = l2_decrease_rate(c, "minmod")
        worst = max(worst, rate / max(1.0, abs(rate)))
    jumps = np.array([1, 2, 4, 8, 4, 2, 1.0])
    w = _field(np.cumsum(np.concatenate([[0, 0], jumps, [0, 0], -jumps, [0, 0]])) / jumps.sum())
    witness = l2_decrease_rate(w, "superbee")
    _verdict(7, "L2 monotonicity of minmod, superbee witness", worst <= 1e-12 and witness > 0,
             f"max scaled minmod rate {worst:.2e}, superbee witness rate {witness:.3f}")


@pytest.mark.criterion(8, "Glimm inclusion, front and expectation")
def test_glimm():
    t0 = time.perf_counter()
    grid = Grid1D(0.0, 1.0, 512)
    c = project_initial(Box(0.1, 0.6), grid)
    allowed = np.unique(c.values)
    seq = SamplingSequence("pseudo_random", seed=SEED)
    created = 0
    for _ in range(10_000):
        c = glimm_step(c, 0.4, next(seq))
        created += int((~np.isin(c.values, allowed)).sum())
    rep = run_experiment(ExperimentConfig("glimm1d", grids=(512,), nu=0.4, t_end=1000 * 0.4 / 512))
    front = rep.metrics["front_error_in_dx"]
    small = project_initial(Box(0.2, 0.5), Grid1D(0.0, 1.0, 16))
    mean, se = glimm_expectation(small, 0.4, 3, 100_000, seed=SEED)
    ref = small
    for _ in range(3):
        ref = step_linear(ref, upwind(0.4))
    live = se > 0
    z = float((np.abs(mean - ref.values)[live] / se[live]).max())
    dead_ok = np.allclose(mean[~live], ref.values[~live], atol=1e-14)
    elapsed = time.perf_counter() - t0
    _verdict(8, "Glimm inclusion, front and expectation",
             created == 0 and front <= 3 and z <= 5 and dead_ok and elapsed < 60,
             f"new values {created}, front {front:.2f} dx, max z {z:.2f}, {elapsed:.1f} s")


@pytest.mark.criterion(9, "half level set of upwind")
def test_half_level_set():
    worst_root = 0.0
    for t in np.linspace(0.05, 1.0, 20):
        params = ModifiedEqParams.from_scheme(1.0, 1 / 200, 0.5, t)
        root = brentq(lambda x: modified_solution(x, params) - 0.5, t - 0.5, t + 0.5,
                      xtol=1e-15, rtol=4 * np.finfo(float).eps)
        worst_root = max(worst_root, abs(root - t))
    discrete_ok, parts = True, []
    for nu in (0.25, 0.5, 0.75):
        rep = run_experiment(ExperimentConfig("levelset1d", nu=nu, t_end=1.0))
        discrete_ok &= rep.violations.get("half_level_within_dx", 0) == 0 and rep.ok
        parts.append(f"nu={nu}: {rep.metrics['half_level_error_in_dx_n200']:.2f} dx")
    _verdict(9, "half level set of upwind", worst_root <= 1e-12 and discrete_ok,
             f"brentq error {worst_root:.1e}; " + ", ".join(parts))


@pytest.mark.criterion(10, "Vofire conservativity, mass, maximum principle, sharpening")
def test_vofire():
    rng = np.random.default_rng(SEED)
    n = 100_000
    cj, ck, cl = rng.uniform(-1, 2, (3, n))
    sk, sl = rng.uniform(0.01, 1.0, (2, n))
    r = transverse_reconstruct(cj, ck, cl, sk, sl)
    recon = float((np.abs(sk * r.c_jk_R + sl * r.c_jl_R - (sk + sl) * cj)
                   / np.maximum(1.0, np.abs((sk + sl) * cj))).max())

    mesh = build_structured_tri_mesh(32, 32)
    u = np.array([1.0, 0.37])
    geo = vofire_geometry(mesh, u)
    dt = 0.9 / cfl_numbers(mesh, u, 1.0).max()
    mass, mp = 0.0, 0
    for _ in range(1000):
        c = TriField(mesh, rng.uniform(-1, 2, mesh.n_cells))
        lo, hi = upwind_bounds(mesh, c, u)
        new = vofire_step(mesh, c, u, dt, geometry=geo)
        mass = max(mass, abs(new.mass() - c.mass()))
        mp += int(np.any(new.values < lo - 1e-12) or np.any(new.values > hi + 1e-12))

    diag = np.array([1.0, -1.0])
    c0 = project_indicator(mesh, (0.25, 0.25, 0.75, 0.75))
    gd = vofire_geometry(mesh, diag)
    a = b = c0
    for _ in range(128):
        a = upwind_step_tri(mesh, a, diag, 1 / 128)
        b = vofire_step(mesh, b, diag, 1 / 128, geometry=gd)
        mass = max(mass, abs(b.mass() - c0.mass()))

    def mixed(f):
        return int(((f.values > 0.01) & (f.values < 0.99)).sum())

    _verdict(10, "Vofire conservativity, mass, maximum principle, sharpening",
             recon <= 1e-13 and mass <= 1e-12 and mp == 0 and mixed(b) < mixed(a),
             f"reconstruction {recon:.1e}, mass {mass:.1e}, MP violations {mp}, "
             f"mixed cells {mixed(b)} vs upwind {mixed(a)}")


@pytest.mark.criterion(11, "split UltraBee: exact square, bounded bump with TV growth")
def test_split_2d():
    grid = Grid1D(0.0, 1.0, 64)
    box = Box(0.25, 0.75)
    cx = project_initial(box, grid).values
    c = np.outer(cx, cx)
    exact_err = 0.0
    for s in range(1, 161):
        c = split_ultrabee_2d(c, 0.4, 0.4)
        e = exact_advect_average(box, grid, 1.0, s * 0.4 * grid.dx).values
        exact_err = max(exact_err, float(np.abs(c - np.outer(e, e)).max()))

    b0 = smooth_disk_average(64)
    lo, hi = b0.min(), b0.max()
    tv0 = total_variation_2d(b0)
    b, bounded, grew = b0, True, None
    for s in range(1, 161):
        b = split_ultrabee_2d(b, 0.4, 0.4)
        bounded &= bool(b.min() >= lo - 1e-12 and b.max() <= hi + 1e-12)
        if grew is None and total_variation_2d(b) > tv0 + 1e-12:
            grew = s
    _verdict(11, "split UltraBee: exact square, bounded bump with TV growth",
             exact_err <= 1e-12 and bounded and grew is not None,
             f"square error {exact_err:.1e}, bump bounded {bounded}, TV first exceeds initial at step {grew}")


@pytest.mark.criterion(12, "two-fluid Lagrange-remap")
def test_two_fluid():
    t0 = time.perf_counter()
    mix = GasPair(1.4, 1.6, 1.0, 2.0)
    air = GasPair()

    # Y = 1 everywhere: the limited Y flux has nothing to choose from
    s, _ = sod_state(200, mix)
    a = b = s
    for _ in range(60):
        dt = stable_dt(a, mix, 1 / 200)
        a = step(a, mix, dt, 1 / 200, "transmissive", "limited_downwind")
        b = step(b, mix, dt, 1 / 200, "transmissive", "upwind")
    reduction = max(float(np.abs(getattr(a, k) - getattr(b, k)).max())
                    for k in ("rho", "rhoY", "rhoU", "rhoE"))

    s, x = sod_state(400, air)
    out, _ = run(s, air, 1 / 400, 0.2, bc="transmissive")
    rho_exact, _, _ = exact_riemann_single_gas((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 1.4, (x - 0.5) / 0.2)
    sod_l1 = float(np.abs(out.rho - rho_exact).mean())

    n = 100
    dx = 1 / n
    xc = (np.arange(n) + 0.5) * dx
    s = FluidState.from_primitive(np.ones(n), np.ones(n), np.ones(n),
                                  ((xc >= 0.25) & (xc < 0.75)).astype(float), air)
    max_mixed, spread = 0, 0.0
    t = 0.0
    while t < 1.0 - 1e-14:
        dt = min(stable_dt(s, air, dx, 0.5), 1.0 - t)
        s = step(s, air, dt, dx)
        t += dt
        Y = s.Y
        max_mixed = max(max_mixed, int(((Y > 1e-12) & (Y < 1 - 1e-12)).sum()))
        spread = max(spread, *(float(np.ptp(v)) for v in (s.rho, s.u, s.pressure(air))))

    rng = np.random.default_rng(SEED)
    drift, y_violations = 0.0, 0
    for _ in range(20):
        m = 48
        dx = 1 / m
        s = FluidState.from_primitive(rng.uniform(0.5, 2, m), rng.uniform(-1, 1, m),
                                      rng.uniform(0.5, 2, m), rng.uniform(0, 1, m), mix)
        for _ in range(40):
            before = s.totals(dx)
            try:
                s = step(s, mix, stable_dt(s, mix, dx, 0.5), dx)
            except InvariantViolation:
                y_violations += 1
                break
            drift = max(drift, float(np.abs(s.totals(dx) - before).max()))
    elapsed = time.perf_counter() - t0
    ok = (reduction <= 1e-12 and sod_l1 <= 5e-2 and max_mixed <= 2 and spread <= 1e-10
          and drift <= 1e-11 and y_violations == 0 and elapsed < 60)
    _verdict(12, "two-fluid Lagrange-remap", ok,
             f"reduction {reduction:.1e}, Sod L1 {sod_l1:.4f}, mixed cells {max_mixed}, "
             f"uniformity {spread:.1e}, conservation {drift:.1e}, Y violations {y_violations}, {elapsed:.1f} s")
