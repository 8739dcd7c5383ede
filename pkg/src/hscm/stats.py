"""Empirical degree statistics and comparison with the theoretical laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, zeta

from .errors import DomainError, EdgeListParseError, InsufficientTailError
from .graphon import KernelKind, expected_degree_fn
from .params import EnsembleParams, mu_n_quantile
from .quadrature import gauss_legendre_nodes
from .sampler import Graph
from .theory import DegreeLaw, expected_avg_degree_finite_n


@dataclass
class DegreeHistogram:
    """Pooled degree counts over one or more graphs of equal size."""

    counts: np.ndarray
    n: int
    n_graphs: int
    edges_per_graph: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    duplicates_dropped: int = 0
    self_loops_dropped: int = 0

    @property
    def total_nodes(self) -> int:
        return self.n * self.n_graphs

    def pmf(self) -> np.ndarray:
        return self.counts / self.total_nodes

    def mean_degree(self) -> float:
        return float(np.arange(self.counts.size) @ self.counts) / self.total_nodes

    def mean_degree_se(self) -> float:
        """Standard error of the mean degree, across replicas when available."""
        if self.edges_per_graph.size >= 2:
            per = 2.0 * self.edges_per_graph / self.n
            return float(np.std(per, ddof=1) / math.sqrt(per.size))
        ks = np.arange(self.counts.size)
        var = float(ks * ks @ self.counts) / self.total_nodes - self.mean_degree() ** 2
        return math.sqrt(max(var, 0.0) / self.total_nodes)


def degree_histogram(graphs) -> DegreeHistogram:
    """Exact pooled degree counts of graphs that all share one node count."""
    graphs = list(graphs)
    if not graphs:
        raise DomainError("no graphs given")
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise DomainError("all graphs must have the same node count")
    kmax = 0
    degs = []
    for g in graphs:
        d = g.degrees()
        kmax = max(kmax, int(d.max(initial=0)))
        degs.append(d)
    counts = np.zeros(kmax + 1, dtype=np.int64)
    for d in degs:
        counts += np.bincount(d, minlength=kmax + 1)
    epg = np.array([g.num_edges for g in graphs], dtype=np.int64)
    return DegreeHistogram(counts=counts, n=n, n_graphs=len(graphs), edges_per_graph=epg)


def tv_distance_lumped(p_emp: np.ndarray, q: np.ndarray, k_max: int) -> float:
    """Total variation on the partition {0, .., k_max, >k_max}.

    q must have length k_max + 1 and sum to at most 1; its deficit is the
    theoretical tail mass.
    """
    pe = np.zeros(k_max + 1)
    upto = min(p_emp.size, k_max + 1)
    pe[:upto] = p_emp[:upto]
    pe_tail = max(0.0, 1.0 - pe.sum())
    q_tail = max(0.0, 1.0 - q.sum())
    return 0.5 * (np.abs(pe - q).sum() + abs(pe_tail - q_tail))


def finite_n_degree_pmf(p: EnsembleParams, k_max: int, nodes: int = 512) -> np.ndarray:
    """Mixed-Poisson pmf with the finite-n mixing kappa_n(X), by quadrature.

    The latent quantile u is substituted as u = z**gamma so that the mixing
    parameter is nearly proportional to 1/z, then integrated with
    Gauss-Legendre nodes; kappa_n at each node is the adaptive expected-degree
    quadrature.  Returns pmf(0..k_max); the deficit to 1 is the tail mass.
    """
    z, wz = gauss_legendre_nodes(0.0, 1.0, nodes)
    w = wz * p.gamma * z ** (p.gamma - 1.0)
    x = mu_n_quantile(p, z ** p.gamma)
    kappa = np.array([expected_degree_fn(p, xi, KernelKind.FERMI_DIRAC) for xi in x])
    ks = np.arange(k_max + 1, dtype=float)
    log_pois = ks[:, None] * np.log(kappa[None, :]) - kappa[None, :] \
        - gammaln(ks + 1.0)[:, None]
    return np.exp(log_pois) @ w


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical histogram versus the asymptotic and finite-n theory."""

    k_max: int
    tv_asymptotic: float
    tv_finite_n: float
    avg_degree_empirical: float
    avg_degree_empirical_se: float
    avg_degree_finite_n: float
    avg_degree_asymptotic: float
    tail_exponent_estimate: float | None


def compare_to_theory(h: DegreeHistogram, p: EnsembleParams, k_max: int = 100) -> ComparisonReport:
    """TV distances (tail lumped beyond k_max) and average-degree deltas."""
    law = DegreeLaw(p)
    q_asym = law.pmf_array(k_max)
    q_fin = finite_n_degree_pmf(p, k_max)
    pe = h.pmf()
    try:
        alpha = tail_exponent(h)
    except InsufficientTailError:
        alpha = None
    return ComparisonReport(
        k_max=k_max,
        tv_asymptotic=tv_distance_lumped(pe, q_asym, k_max),
        tv_finite_n=tv_distance_lumped(pe, q_fin, k_max),
        avg_degree_empirical=h.mean_degree(),
        avg_degree_empirical_se=h.mean_degree_se(),
        avg_degree_finite_n=expected_avg_degree_finite_n(p),
        avg_degree_asymptotic=p.nu,
        tail_exponent_estimate=alpha,
    )


@dataclass(frozen=True)
class TailFit:
    alpha: float
    k_min: int
    ks_distance: float
    n_tail: int


_MIN_TAIL_SAMPLES = 100
_ALPHA_LO, _ALPHA_HI = 1.000001, 40.0
# Degenerate-fit rejection: real degree tails fit with small KS distance and
# moderate exponents; truncated-flat histograms end up at KS ~ 0.15 with
# runaway exponents.
_KS_REJECT = 0.1
_ALPHA_REJECT = 10.0


def _zeta_log_deriv(alpha: float, k_min: int) -> float:
    h = 1e-5
    return (math.log(zeta(alpha + h, k_min)) - math.log(zeta(alpha - h, k_min))) / (2 * h)


def _mle_alpha(mean_log: float, k_min: int) -> float:
    """Solve -zeta'(a, k_min)/zeta(a, k_min) = mean_log by bisection."""

    def g(a):
        return -_zeta_log_deriv(a, k_min) - mean_log

    lo, hi = _ALPHA_LO, _ALPHA_HI
    if g(hi) > 0.0:  # sample mean-log below the model's infimum
        return _ALPHA_HI
    if g(lo) < 0.0:
        return _ALPHA_LO
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def tail_exponent_fit(h: DegreeHistogram, k_min: int | None = None) -> TailFit:
    """Discrete maximum-likelihood power-law fit of the histogram tail.

    The exponent solves the Hurwitz-zeta likelihood equation; when k_min is
    not given it is chosen to minimize the Kolmogorov-Smirnov distance over
    candidate cutoffs that keep at least 100 tail samples.  Degenerate inputs
    (too little tail, no power-law decay) raise InsufficientTailError.
    """
    counts = h.counts.astype(np.int64)
    ks = np.arange(counts.size)
    present = ks[(counts > 0) & (ks >= 1)]
    if present.size < 2:
        raise InsufficientTailError("histogram has fewer than two positive-degree values")
    if k_min is not None:
        candidates = [int(k_min)]
    else:
        cand = present[:-1]
        if cand.size > 64:  # thin the scan, keeping the log profile
            keep = np.geomspace(cand[0], cand[-1], 64)
            idx = np.searchsorted(cand, keep, side="left").clip(0, cand.size - 1)
            cand = np.unique(cand[idx])
        candidates = [int(k) for k in cand]

    best = None
    for km in candidates:
        sel = ks >= km
        c = counts[sel]
        kv = ks[sel]
        n_tail = int(c.sum())
        if n_tail < _MIN_TAIL_SAMPLES or (c > 0).sum() < 2:
            continue
        mean_log = float(c @ np.log(kv)) / n_tail
        alpha = _mle_alpha(mean_log, km)
        # KS distance between the fitted and empirical tail CDFs
        z0 = zeta(alpha, km)
        model_cdf = 1.0 - zeta(alpha, kv + 1.0) / z0
        emp_cdf = np.cumsum(c) / n_tail
        ksd = float(np.max(np.abs(model_cdf - emp_cdf)))
        if best is None or ksd < best.ks_distance:
            best = TailFit(alpha=alpha, k_min=km, ks_distance=ksd, n_tail=n_tail)

    if best is None:
        raise InsufficientTailError(
            f"no cutoff leaves at least {_MIN_TAIL_SAMPLES} tail samples")
    if (best.ks_distance > _KS_REJECT or best.alpha >= _ALPHA_REJECT
            or best.alpha <= _ALPHA_LO * 1.01):
        raise InsufficientTailError(
            f"tail is not power-law-like (KS {best.ks_distance:.3f}, "
            f"alpha {best.alpha:.2f} at k_min {best.k_min})")
    return best


def tail_exponent(h: DegreeHistogram, k_min: int | None = None) -> float:
    return tail_exponent_fit(h, k_min).alpha


def ingest_edge_list(path) -> DegreeHistogram:
    """Histogram of an external whitespace-separated edge list.

    Lines starting with '#' and blank lines are skipped; 0- versus 1-indexing
    is auto-detected (1-indexed when no zero id appears).  Self-loops and
    duplicate edges are dropped and counted.
    """
    us, vs = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) < 2:
                raise EdgeListParseError(path, lineno, "expected two node ids")
            try:
                u = int(parts[0])
                v = int(parts[1])
            except ValueError:
                raise EdgeListParseError(path, lineno,
                                         f"non-integer node id in {parts[:2]}") from None
            if u < 0 or v < 0:
                raise EdgeListParseError(path, lineno, "negative node id")
            us.append(u)
            vs.append(v)
    if not us:
        raise EdgeListParseError(path, 0, "no edges found")
    u = np.array(us, dtype=np.int64)
    v = np.array(vs, dtype=np.int64)
    if min(u.min(), v.min()) >= 1:  # 1-indexed input
        u -= 1
        v -= 1
    n = int(max(u.max(), v.max())) + 1
    loops = int((u == v).sum())
    keep = u != v
    lo = np.minimum(u[keep], v[keep])
    hi = np.maximum(u[keep], v[keep])
    pair_ids = lo * np.int64(n) + hi
    unique_ids, first = np.unique(pair_ids, return_index=True)
    dups = int(pair_ids.size - unique_ids.size)
    edges = np.column_stack((lo[first], hi[first]))
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    g = Graph(n=n, edges=edges[order])
    hist = degree_histogram([g])
    hist.duplicates_dropped = dups
    hist.self_loops_dropped = loops
    return hist
