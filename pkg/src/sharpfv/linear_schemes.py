"""Explicit linear advection schemes ``c_j' = sum_r alpha_r c_{j+r}``.

A scheme is indexed by its order ``p`` and shift ``k``; the stencil is
``{j+k-p, ..., j+k}``. Upwind is ``(1, 0)``, Lax-Wendroff ``(2, 1)``,
Beam-Warming ``(2, 0)`` and the third-order O3 scheme ``(3, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core1d import CellField, check_cfl, pad

__all__ = [
    "SchemeCoefficients",
    "is_coefficients",
    "vandermonde_coefficients",
    "is_stable_pair",
    "step_linear",
    "amplification_factor",
    "max_amplification",
    "upwind",
    "lax_wendroff",
    "beam_warming",
    "o3",
]


@dataclass(frozen=True)
class SchemeCoefficients:
    p: int
    k: int
    nu: float
    alphas: np.ndarray = field(repr=False)

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(self.k - self.p, self.k + 1)

    def weight(self, r: int) -> float:
        """Weight of ``c_{j+r}``; zero outside the stencil."""
        if self.k - self.p <= r <= self.k:
            return float(self.alphas[r - self.k + self.p])
        return 0.0


def _validate(p, k):
    if int(p) != p or p < 1:
        raise ValueError(f"order p must be an integer >= 1, got {p}")
    if int(k) != k or k < 0:
        raise ValueError(f"shift k must be an integer >= 0, got {k}")
    if k > p:
        raise ValueError(f"shift k={k} exceeds order p={p}")


def is_coefficients(p: int, k: int, nu: float) -> SchemeCoefficients:
    """Weights of the order-``p`` scheme with shift ``k`` at CFL number ``nu``.

    The weights are the Lagrange basis polynomials of the nodes
    ``k-p, ..., k`` evaluated at ``-nu``, the unique solution of the
    order conditions ``sum_r alpha_r r^m = (-nu)^m`` for ``m = 0..p``.
    """
    _validate(p, k)
    nodes = np.arange(k - p, k + 1, dtype=float)
    x = -float(nu)
    alphas = np.empty(p + 1)
    for i, r in enumerate(nodes):
        others = np.delete(nodes, i)
        alphas[i] = np.prod((x - others) / (r - others))
    alphas.setflags(write=False)
    return SchemeCoefficients(int(p), int(k), float(nu), alphas)


def vandermonde_coefficients(p: int, k: int, nu: float) -> np.ndarray:
    """Same weights obtained by solving the order conditions numerically."""
    _validate(p, k)
    nodes = np.arange(k - p, k + 1, dtype=float)
    A = np.vander(nodes, p + 1, increasing=True).T
    rhs = (-float(nu)) ** np.arange(p + 1)
    return np.linalg.solve(A, rhs)


def is_stable_pair(p: int, k: int) -> bool:
    """Whether ``(p, k)`` belongs to the l2-stable families p = 2k, 2k+1, 2k+2."""
    return p in (2 * k, 2 * k + 1, 2 * k + 2)


def step_linear(c: CellField, coeffs: SchemeCoefficients) -> CellField:
    """One time step of the linear scheme (periodic or ghost-padded)."""
    check_cfl(coeffs.nu)
    lo = max(0, coeffs.p - coeffs.k)
    hi = coeffs.k
    n = c.grid.n_cells
    ext = pad(c.values, c.grid, lo, hi)
    out = np.zeros(n)
    for a, r in zip(coeffs.alphas, coeffs.offsets):
        out += a * ext[lo + r: lo + r + n]
    return c.with_values(out)


def amplification_factor(coeffs: SchemeCoefficients, theta):
    """Von Neumann symbol ``g(theta) = sum_r alpha_r exp(i r theta)``."""
    theta = np.asarray(theta, dtype=float)
    return np.exp(1j * np.multiply.outer(theta, coeffs.offsets)) @ coeffs.alphas


def max_amplification(coeffs: SchemeCoefficients, n_theta: int = 1024) -> float:
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return float(np.abs(amplification_factor(coeffs, theta)).max())


def upwind(nu):
    return is_coefficients(1, 0, nu)


def lax_wendroff(nu):
    return is_coefficients(2, 1, nu)


def beam_warming(nu):
    return is_coefficients(2, 0, nu)


def o3(nu):
    return is_coefficients(3, 1, nu)
