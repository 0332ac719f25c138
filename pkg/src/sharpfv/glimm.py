"""Glimm's random choice method for linear advection.

Each step draws one sample ``s`` in [0, 1) for the whole grid and picks, in
every cell, the value of the exactly transported profile at the sampling
point: the upwind neighbour when ``s < nu``, the cell itself otherwise.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core1d import CellField, check_cfl, pad

__all__ = [
    "van_der_corput",
    "SamplingSequence",
    "glimm_step",
    "glimm_run",
    "conservation_drift",
    "glimm_expectation",
]


def van_der_corput(n: int, base: int = 2) -> float:
    """Radical inverse of ``n`` (digit reversal about the radix point)."""
    if int(n) != n or n < 1:
        raise ValueError(f"van der Corput index must be >= 1, got {n}")
    n = int(n)
    q, denom = 0.0, 1.0
    while n:
        n, digit = divmod(n, base)
        denom *= base
        q += digit / denom
    return q


class SamplingSequence:
    """Stateful sample source: ``"van_der_corput"`` or ``"pseudo_random"``.

    The Van der Corput counter starts at 1 so the first sample is 0.5.
    Pseudo-random samples come from ``numpy.random.default_rng(seed)``.
    """

    def __init__(self, kind: str = "van_der_corput", seed: int | None = None):
        if kind not in ("van_der_corput", "pseudo_random"):
            raise ValueError(f"unknown sampling sequence {kind!r}")
        if kind == "pseudo_random" and seed is None:
            raise ValueError("pseudo_random sampling needs a seed")
        self.kind = kind
        self.seed = seed
        self.counter = 0
        self._rng = np.random.default_rng(seed) if kind == "pseudo_random" else None

    def __next__(self) -> float:
        self.counter += 1
        if self._rng is None:
            return van_der_corput(self.counter)
        return float(self._rng.random())

    def __iter__(self):
        return self


def glimm_step(c: CellField, nu: float, sample: float) -> CellField:
    """One random-choice step for rightward transport (0 <= nu <= 1)."""
    check_cfl(nu)
    if nu < 0:
        raise ValueError("glimm_step assumes nu >= 0")
    if not 0.0 <= sample < 1.0:
        raise ValueError("sample must lie in [0, 1)")
    if sample < nu:
        return c.with_values(pad(c.values, c.grid, 1, 0)[:-1])
    return c


def glimm_run(c: CellField, nu: float, seq: SamplingSequence, n_steps: int) -> list[CellField]:
    """Advance ``n_steps`` steps, consuming one sample per step; returns the history."""
    history = [c]
    for _ in range(n_steps):
        c = glimm_step(c, nu, next(seq))
        history.append(c)
    return history


def conservation_drift(history: Sequence[CellField]) -> np.ndarray:
    """``|mass(t_n) - mass(t_0)|`` for each snapshot of a run."""
    if not history:
        return np.zeros(0)
    g = history[0].grid
    if any(h.grid != g for h in history):
        raise ValueError("history mixes grids")
    m0 = history[0].values.sum()
    return np.array([abs(h.values.sum() - m0) * g.dx for h in history])


def glimm_expectation(c: CellField, nu: float, n_steps: int, n_samples: int, seed: int):
    """Monte Carlo mean and standard error of ``n_steps`` random-choice steps.

    Each sample is an independent run driven by pseudo-random draws; the
    mean should match ``n_steps`` upwind steps.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(seed)
    draws = rng.random((n_samples, n_steps))
    total = np.zeros(len(c))
    total_sq = np.zeros(len(c))
    for row in draws:
        f = c
        for s in row:
            f = glimm_step(f, nu, float(s))
        total += f.values
        total_sq += f.values ** 2
    mean = total / n_samples
    var = np.maximum(total_sq / n_samples - mean ** 2, 0.0) * n_samples / (n_samples - 1)
    return mean, np.sqrt(var / n_samples)
