"""Graphon entropy, rescaled convergence, Gibbs bounds, and the maximality check.

The graphon entropy of an ensemble is

    sigma = integral of H(K(x, y)) d mu_n(x) d mu_n(y)  over the support square,

with H the Bernoulli entropy.  The per-graph Gibbs (Shannon) entropy S of the
ensemble is bracketed by

    C(n,2) * sigma  <=  S  <=  n * S[M] + C(n,2) * sigma[averaged kernel],

where M is the index of the partition interval a node's coordinate falls in
and the averaged kernel replaces K by its mean over each partition box.  Both
bounds are computed here; rescaled by 2 / (n log n) they converge to the
target average degree from the two sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DomainError
from .graphon import KernelKind, bernoulli_entropy, entropy_of_sum, w_fermi_dirac
from .params import EnsembleParams, mu_n_quantile
from .quadrature import gauss_legendre_nodes, quad_checked

# Latent-measure quantile at which the unbounded tail is truncated; since
# H <= log 2 the induced absolute error is below log(2) * (2e-12 + 1e-24).
TAIL_QUANTILE = 1e-12


@dataclass(frozen=True)
class PartitionSpec:
    """Partition of the support (-inf, r_n] into m_n intervals.

    rho[0] = -inf, rho[1] = -r_n, and rho[2..m_n] equally spaced up to r_n
    with width 2 r_n / (m_n - 1).
    """

    m_n: int
    rho: np.ndarray

    @classmethod
    def from_params(cls, p: EnsembleParams, m_n: int | None = None) -> "PartitionSpec":
        if p.r_n <= 0.0:
            raise DomainError("partition construction requires r_n > 0 (n > beta^2 nu)")
        if m_n is None:
            m_n = math.ceil(math.log(p.n) ** 2) + 1
        if m_n < 2:
            raise DomainError("partition needs at least 2 intervals")
        rho = np.empty(m_n + 1)
        rho[0] = -np.inf
        rho[1:] = np.linspace(-p.r_n, p.r_n, m_n)
        return cls(m_n=m_n, rho=rho)

    def refine_doubled(self) -> "PartitionSpec":
        """Nested refinement: every finite interval halved."""
        m2 = 2 * (self.m_n - 1) + 1
        rho = np.empty(m2 + 1)
        rho[0] = -np.inf
        rho[1:] = np.linspace(self.rho[1], self.rho[-1], m2)
        return PartitionSpec(m_n=m2, rho=rho)


def interval_masses(p: EnsembleParams, part: PartitionSpec) -> np.ndarray:
    """Latent-measure mass of each partition interval (sums to 1)."""
    cdf_right = np.exp(np.minimum(p.gamma * (part.rho[1:] - p.r_n), 0.0))
    cdf_left = np.concatenate(([0.0], cdf_right[:-1]))
    return cdf_right - cdf_left


def membership_entropy(p: EnsembleParams, part: PartitionSpec) -> float:
    """Entropy S[M] of the interval-membership variable, from exact masses."""
    masses = interval_masses(p, part)
    return float(-np.sum(xlogy(masses, masses)))


def _entropy_double_integral(p: EnsembleParams, h_of_sum, rtol: float,
                             tail_quantile: float = TAIL_QUANTILE) -> float:
    """Nested adaptive quadrature of h(x + y) d mu_n(x) d mu_n(y).

    The -inf tail is truncated at the given latent-measure quantile; both
    kernels' entropy integrands are bounded by log 2, which keeps the
    truncation error within the stated budget.  Break points are placed on
    the kernel midline x + y = 0 where the integrand peaks.
    """
    gamma, r_n = p.gamma, p.r_n
    x_lo = mu_n_quantile(p, tail_quantile)

    def inner(x):
        def f(y):
            return gamma * math.exp(gamma * (y - r_n)) * h_of_sum(x + y)

        pts = [-x - 4.0, -x, -x + 4.0]
        return quad_checked(f, x_lo, r_n, rtol=rtol / 3.0, points=pts)

    def outer(x):
        return gamma * math.exp(gamma * (x - r_n)) * inner(x)

    return quad_checked(outer, x_lo, r_n, rtol=rtol / 3.0,
                        points=[-r_n, 0.0, r_n - 4.0])


def graphon_entropy(p: EnsembleParams, kind: KernelKind = KernelKind.FERMI_DIRAC,
                    rtol: float = 1e-7) -> float:
    """Graphon entropy sigma by 2D adaptive quadrature."""
    return _entropy_double_integral(p, entropy_of_sum(kind), rtol)


def negative_region_entropy(p: EnsembleParams,
                            kind: KernelKind = KernelKind.FERMI_DIRAC,
                            rtol: float = 1e-6) -> float:
    """Contribution to sigma from the region where x or y is negative."""
    full = _entropy_double_integral(p, entropy_of_sum(kind), rtol)
    gamma, r_n = p.gamma, p.r_n
    if r_n <= 0:
        return full
    h = entropy_of_sum(kind)

    def inner(x):
        def f(y):
            return gamma * math.exp(gamma * (y - r_n)) * h(x + y)

        pts = [-x - 4.0, -x, -x + 4.0]
        return quad_checked(f, 0.0, r_n, rtol=rtol / 3.0, points=pts)

    def outer(x):
        return gamma * math.exp(gamma * (x - r_n)) * inner(x)

    positive_square = quad_checked(outer, 0.0, r_n, rtol=rtol / 3.0, points=[r_n - 4.0])
    return full - positive_square


def rescaled_entropy_series(gamma: float, nu: float, sizes, kind=KernelKind.FERMI_DIRAC,
                            rtol: float = 1e-7):
    """[(n, n * sigma / log n)] over increasing sizes."""
    from .params import derive_params

    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise DomainError("sizes must be strictly increasing")
    out = []
    for n in sizes:
        p = derive_params(gamma, nu, n)
        sigma = graphon_entropy(p, kind, rtol=rtol)
        out.append((n, n * sigma / math.log(n)))
    return out


def deviation_log_slope(series, nu: float) -> float:
    """Least-squares slope of log |n sigma/log n - nu| against log log n."""
    ns = np.array([n for n, _ in series], dtype=float)
    dev = np.abs(np.array([v for _, v in series]) - nu)
    if np.any(dev == 0.0):
        raise DomainError("zero deviation; slope undefined")
    return float(np.polyfit(np.log(np.log(ns)), np.log(dev), 1)[0])


@dataclass(frozen=True)
class AveragedGraphon:
    """Piecewise-constant kernel: the box averages of a kernel over a partition."""

    params: EnsembleParams
    part: PartitionSpec
    kind: KernelKind
    masses: np.ndarray
    box_values: np.ndarray  # (m_n, m_n), symmetric

    def value(self, x, y) -> float:
        s = int(np.searchsorted(self.part.rho[1:], x, side="left"))
        t = int(np.searchsorted(self.part.rho[1:], y, side="left"))
        if not (0 <= s < self.part.m_n and 0 <= t < self.part.m_n):
            raise DomainError("coordinate outside the partitioned support")
        return float(self.box_values[s, t])

    def sigma(self) -> float:
        """Graphon entropy of the averaged kernel (exact given the box values)."""
        h = bernoulli_entropy(self.box_values)
        return float(self.masses @ h @ self.masses)

    def bracket_bounds(self):
        """(min, max) of the underlying kernel on every box, for bracket checks.

        The kernel decreases in x + y, so on box (s, t) the extremes sit at
        the corners rho[s+1] + rho[t+1] (min) and rho[s] + rho[t] (max).
        """
        from .graphon import kernel

        k = kernel(self.kind)
        right = self.part.rho[1:]
        left = self.part.rho[:-1]
        kmin = k(right[:, None], right[None, :])
        kmax = k(left[:, None] + 0.0, left[None, :] + 0.0)
        return kmin, kmax


def averaged_graphon(p: EnsembleParams, part: PartitionSpec,
                     kind: KernelKind = KernelKind.FERMI_DIRAC,
                     gl_order: int = 16) -> AveragedGraphon:
    """Average the kernel over every partition box against the latent measure.

    Finite intervals use Gauss-Legendre nodes in x weighted by the latent
    density; the unbounded first interval is mapped through u = CDF(x), where
    the measure is uniform.  All boxes are assembled in one vectorized pass.
    """
    gamma, r_n = p.gamma, p.r_n
    m = part.m_n
    masses = interval_masses(p, part)
    nodes = np.empty((m, gl_order))
    weights = np.empty((m, gl_order))
    u1 = math.exp(gamma * (part.rho[1] - r_n))
    un, uw = gauss_legendre_nodes(0.0, u1, gl_order)
    nodes[0] = r_n + np.log(un) / gamma
    weights[0] = uw
    for t in range(1, m):
        xn, xw = gauss_legendre_nodes(part.rho[t], part.rho[t + 1], gl_order)
        nodes[t] = xn
        weights[t] = xw * gamma * np.exp(gamma * (xn - r_n))

    from .graphon import kernel as kernel_fn

    k = kernel_fn(kind)
    flat_nodes = nodes.ravel()
    flat_weights = weights.ravel()
    box = np.empty((m, m))
    for s in range(m):
        kmat = k(nodes[s][:, None], flat_nodes[None, :])
        row = (weights[s][:, None] * flat_weights[None, :] * kmat).sum(axis=0)
        box[s] = row.reshape(m, gl_order).sum(axis=1)
    box /= masses[:, None] * masses[None, :]
    box = np.clip(box, 0.0, 1.0)
    return AveragedGraphon(params=p, part=part, kind=kind, masses=masses,
                           box_values=box)


@dataclass(frozen=True)
class EntropyReport:
    """Graphon entropy with the Gibbs-entropy sandwich for one ensemble."""

    params: EnsembleParams
    sigma: float
    sigma_rescaled: float
    gibbs_lower: float
    gibbs_upper: float
    partition: PartitionSpec
    s_m: float

    @property
    def gibbs_lower_rescaled(self) -> float:
        n = self.params.n
        return 2.0 * self.gibbs_lower / (n * math.log(n))

    @property
    def gibbs_upper_rescaled(self) -> float:
        n = self.params.n
        return 2.0 * self.gibbs_upper / (n * math.log(n))


def gibbs_entropy_bounds(p: EnsembleParams, rtol: float = 1e-7,
                         part: PartitionSpec | None = None) -> EntropyReport:
    """Lower and upper bounds on the Gibbs entropy of the size-n ensemble.

    lower = C(n,2) * sigma; upper = n * S[M] + C(n,2) * sigma[averaged kernel]
    with the standard partition (m_n = ceil(log^2 n) + 1 intervals).
    """
    if part is None:
        part = PartitionSpec.from_params(p)
    sigma = graphon_entropy(p, KernelKind.FERMI_DIRAC, rtol=rtol)
    avg = averaged_graphon(p, part, KernelKind.FERMI_DIRAC)
    s_m = membership_entropy(p, part)
    pairs = 0.5 * p.n * (p.n - 1)
    lower = pairs * sigma
    upper = p.n * s_m + pairs * avg.sigma()
    return EntropyReport(
        params=p,
        sigma=sigma,
        sigma_rescaled=p.n * sigma / math.log(p.n),
        gibbs_lower=lower,
        gibbs_upper=upper,
        partition=part,
        s_m=s_m,
    )


@dataclass(frozen=True)
class MaximalityReport:
    """Outcome of the random-perturbation check of graphon-entropy maximality."""

    sigma_grid: float
    trials: int
    violations: int
    max_entropy_gain: float
    decreases_large: np.ndarray  # per trial, averaged over +/- at eps_large
    decreases_small: np.ndarray
    eps_large: float
    eps_small: float

    @property
    def ratios(self) -> np.ndarray:
        return self.decreases_large / self.decreases_small


def _grid_sigma(w: np.ndarray) -> float:
    return float(np.mean(bernoulli_entropy(w)))


def verify_graphon_maximality(p: EnsembleParams, trials: int = 100, seed: int = 0,
                              grid: int = 200, eps_large: float = 1e-2,
                              eps_small: float = 1e-3) -> MaximalityReport:
    """Check that constraint-preserving perturbations never increase entropy.

    The kernel is discretized on an equal-mass coordinate grid (uniform
    weights), where it is the exact entropy maximizer under its own row
    marginals.  Random symmetric perturbations are double-centered to zero
    row sums (preserving the expected-degree-function constraint) and scaled
    into the feasible band; sigma must not increase at eps in
    {+-eps_large, +-eps_small}, and the decrease must scale as eps^2.
    """
    if trials < 1:
        raise DomainError("need at least one trial")
    qs = (np.arange(grid) + 0.5) / grid
    xg = mu_n_quantile(p, qs)
    w = w_fermi_dirac(xg[:, None], xg[None, :])
    sigma0 = _grid_sigma(w)
    headroom = np.minimum(w, 1.0 - w)

    rng = np.random.default_rng(seed)
    eps_max = max(abs(eps_large), abs(eps_small))
    viol = 0
    max_gain = 0.0
    dec_l = np.empty(trials)
    dec_s = np.empty(trials)
    for t in range(trials):
        m = rng.standard_normal((grid, grid))
        m = 0.5 * (m + m.T)
        # double centering: zero row and column sums, symmetry preserved
        m = m - m.mean(axis=0, keepdims=True) - m.mean(axis=1, keepdims=True) + m.mean()
        scale = 0.9 * np.min(headroom / (eps_max * np.maximum(np.abs(m), 1e-300)))
        delta = m * scale
        gains = {}
        for eps in (eps_large, -eps_large, eps_small, -eps_small):
            sig = _grid_sigma(w + eps * delta)
            gains[eps] = sig - sigma0
            if sig - sigma0 > 1e-14 * max(1.0, abs(sigma0)):
                viol += 1
            max_gain = max(max_gain, sig - sigma0)
        dec_l[t] = -0.5 * (gains[eps_large] + gains[-eps_large])
        dec_s[t] = -0.5 * (gains[eps_small] + gains[-eps_small])
    return MaximalityReport(
        sigma_grid=sigma0, trials=trials, violations=viol,
        max_entropy_gain=max_gain, decreases_large=dec_l, decreases_small=dec_s,
        eps_large=eps_large, eps_small=eps_small,
    )
