"""Soft configuration model: expected degrees -> Lagrange multipliers.

Edge probabilities have the Fermi-Dirac form p_ij = 1 / (exp(l_i + l_j) + 1)
(self-pairs excluded); the multipliers solve the per-node constraints

    sum_{j != i} p_ij = k_i,   i = 1..n.

The solution is the unique entropy maximizer for the given expected degrees.
Freezing sampled latent coordinates of the hypersoft ensemble yields such an
instance directly, with l_i = x_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .graphon import _logistic_neg
from .params import Representation
from .sampler import CoordinateSample


@dataclass(frozen=True)
class ScmInstance:
    """Expected degrees with solved multipliers and the achieved residual."""

    n: int
    expected_degrees: np.ndarray
    multipliers: np.ndarray
    residual: float

    def probability_matrix(self) -> np.ndarray:
        """p_ij matrix with zero diagonal."""
        lam = self.multipliers
        pm = _logistic_neg(lam[:, None] + lam[None, :])
        np.fill_diagonal(pm, 0.0)
        return pm

    def realized_expected_degrees(self) -> np.ndarray:
        return self.probability_matrix().sum(axis=1)


def _degree_sums(lam: np.ndarray) -> np.ndarray:
    pm = _logistic_neg(lam[:, None] + lam[None, :])
    np.fill_diagonal(pm, 0.0)
    return pm.sum(axis=1)


def _bisection_sweeps(lam, k, tol, sweeps):
    """Gauss-Seidel fallback: exact monotone 1D solve per coordinate."""
    n = lam.size
    for _ in range(sweeps):
        for i in range(n):
            others = np.delete(lam, i)
            ki = k[i]

            def f(li):
                return _logistic_neg(li + others).sum() - ki

            lo, hi = -60.0, 60.0
            if f(lo) < 0 or f(hi) > 0:
                raise ConvergenceError("expected degree outside the bracketable range")
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if f(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            lam[i] = 0.5 * (lo + hi)
        res = float(np.max(np.abs(_degree_sums(lam) - k)))
        if res < tol:
            return lam, res
    return lam, float(np.max(np.abs(_degree_sums(lam) - k)))


def solve_scm(k, tol: float = 1e-10, max_iter: int = 2000, eta: float = 0.5) -> ScmInstance:
    """Solve the multiplier equations by damped fixed-point iteration.

    Update l_i += eta * log(sum_j p_ij / k_i); if the iteration stalls, fall
    back to per-coordinate bisection sweeps.  Raises ConvergenceError if the
    residual never reaches tol.
    """
    k = np.asarray(k, dtype=float)
    n = k.size
    if n < 2:
        raise DomainError("need at least two nodes")
    if np.any(k <= 0.0) or np.any(k >= n - 1):
        raise DomainError("expected degrees must satisfy 0 < k_i < n - 1")

    lam = np.log(np.sqrt(k.sum()) / k)
    best = np.inf
    stall = 0
    for _ in range(max_iter):
        s = _degree_sums(lam)
        res = float(np.max(np.abs(s - k)))
        if res < tol:
            return ScmInstance(n=n, expected_degrees=k.copy(), multipliers=lam,
                               residual=res)
        if res < 0.5 * best:
            best = res
            stall = 0
        else:
            stall += 1
        if stall > 60:
            break  # oscillating or crawling; switch to bisection
        lam = lam + eta * np.log(s / k)

    lam, res = _bisection_sweeps(lam, k, tol, sweeps=300)
    if res >= tol:
        raise ConvergenceError(f"solver stalled at residual {res:.3e} (tol {tol:.1e})")
    return ScmInstance(n=n, expected_degrees=k.copy(), multipliers=lam, residual=res)


def hscm_to_scm(c: CoordinateSample) -> ScmInstance:
    """Freeze sampled coordinates into a soft-configuration instance.

    Multipliers are the exponential coordinates themselves (no solving); the
    induced edge probabilities equal the latent-conditional probabilities of
    the hypersoft ensemble exactly, and the reported expected degrees are
    their row sums.
    """
    if c.rep is not Representation.EXPONENTIAL:
        raise DomainError("hscm_to_scm requires exponential-representation coordinates")
    lam = np.asarray(c.coords, dtype=float)
    k = _degree_sums(lam)
    return ScmInstance(n=lam.size, expected_degrees=k, multipliers=lam.copy(),
                       residual=0.0)
