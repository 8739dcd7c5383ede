"""Thin wrappers around scipy adaptive quadrature with hard error checking."""

from __future__ import annotations

import numpy as np
from scipy import integrate

from .errors import QuadratureError


def quad_checked(f, a, b, rtol=1e-10, atol=0.0, points=None, limit=200):
    """scipy.integrate.quad that raises QuadratureError instead of warning.

    The error estimate must satisfy abserr <= max(atol, rtol * |value|).
    `points` are interior break points (ignored when the interval is infinite,
    as required by scipy).
    """
    infinite = np.isinf(a) or np.isinf(b)
    kwargs = {"epsabs": atol if atol > 0 else 1e-300, "epsrel": rtol, "limit": limit}
    if points is not None and not infinite:
        pts = [float(t) for t in points if min(a, b) < t < max(a, b)]
        if pts:
            kwargs["points"] = sorted(pts)
    value, abserr = integrate.quad(f, a, b, full_output=0, **kwargs)
    if not np.isfinite(value):
        raise QuadratureError(f"quadrature returned non-finite value {value}")
    if abserr > max(atol, rtol * abs(value), 1e-300):
        raise QuadratureError(
            f"quadrature error estimate {abserr:.3e} exceeds tolerance "
            f"for value {value:.6e}"
        )
    return value


def gauss_legendre_nodes(a, b, order):
    """Nodes and weights of Gauss-Legendre quadrature mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
