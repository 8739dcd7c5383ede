"""Command-line surface: reproducible experiment runs emitting plot-ready data.

Subcommands: generate, degrees, entropy, theory, scm-solve, ingest.
Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as hio
from . import rng
from .entropy import gibbs_entropy_bounds
from .errors import (
    ConvergenceError,
    DomainError,
    EdgeListParseError,
    InsufficientTailError,
    NumericalInstabilityError,
    QuadratureError,
    SizeGuardError,
)
from .params import Representation, derive_params
from .sampler import sample_coordinates, sample_graph_fast, sample_graph_growing, \
    sample_graph_naive
from .scm import hscm_to_scm, solve_scm
from .stats import compare_to_theory, degree_histogram, ingest_edge_list
from .theory import DegreeLaw, expected_avg_degree_finite_n, finite_size_degree_tail


def _replica_seeds(seed: int, index: int):
    return (rng.subseed(seed, rng.TAG_REPLICA, 2 * index),
            rng.subseed(seed, rng.TAG_REPLICA, 2 * index + 1))


def _generate_one(args_tuple):
    gamma, nu, n, seed, index, variant, rep_name = args_tuple
    p = derive_params(gamma, nu, n)
    coord_seed, edge_seed = _replica_seeds(seed, index)
    t0 = time.perf_counter()
    if variant == "growing":
        graph, _ = sample_graph_growing(p, coord_seed, n)
    else:
        coords = sample_coordinates(p, coord_seed, Representation(rep_name))
        if variant == "naive":
            graph = sample_graph_naive(coords, edge_seed)
        else:
            graph = sample_graph_fast(coords, edge_seed)
    return index, graph, time.perf_counter() - t0


def _generate_graphs(cfg, seed):
    jobs = [(cfg.gamma, cfg.nu, cfg.n, seed, i, cfg.sampler, cfg.rep)
            for i in range(cfg.replicas)]
    if getattr(cfg, "jobs", 1) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_generate_one, jobs))
    else:
        results = [_generate_one(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    return results


def cmd_generate(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    results = _generate_graphs(cfg, cfg.seed)
    replicas = []
    for index, graph, wall in results:
        path = os.path.join(cfg.out, f"graph_{index:03d}.edges")
        hio.write_edge_list(path, graph, cfg.seed)
        replicas.append({
            "index": index,
            "path": os.path.basename(path),
            "edges": graph.num_edges,
            "avg_degree": graph.average_degree(),
            "wall_time_s": wall,
        })
    hio.write_json(os.path.join(cfg.out, "meta.json"), {
        "command": "generate",
        "config": {
            "gamma": cfg.gamma, "nu": cfg.nu, "n": cfg.n,
            "replicas": cfg.replicas, "seed": cfg.seed,
            "sampler": cfg.sampler, "representation": cfg.rep,
        },
        "replicas": replicas,
    })
    return 0


def cmd_degrees(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    p = derive_params(cfg.gamma, cfg.nu, cfg.n)
    if cfg.input_dir:
        graphs = []
        for name in sorted(os.listdir(cfg.input_dir)):
            if name.endswith(".edges"):
                graphs.append(hio.read_edge_list(os.path.join(cfg.input_dir, name)))
        if not graphs:
            raise DomainError(f"no .edges files under {cfg.input_dir}")
    else:
        graphs = [g for _, g, _ in _generate_graphs(cfg, cfg.seed)]
    if graphs[0].n != cfg.n:
        raise DomainError(f"graphs have n={graphs[0].n} but --n is {cfg.n}")
    hist = degree_histogram(graphs)
    report = compare_to_theory(hist, p, k_max=cfg.k_max)

    law = DegreeLaw(p)
    q_asym = law.pmf_array(cfg.k_max)
    from .stats import finite_n_degree_pmf

    q_fin = finite_n_degree_pmf(p, cfg.k_max)
    pe = hist.pmf()
    rows = []
    for k in range(cfg.k_max + 1):
        emp = pe[k] if k < pe.size else 0.0
        rows.append((k, f"{emp:.10e}", f"{q_asym[k]:.10e}", f"{q_fin[k]:.10e}"))
    hio.write_csv(os.path.join(cfg.out, "degrees.csv"),
                  ["k", "empirical_pmf", "theory_pmf_asymptotic", "theory_pmf_finite_n"],
                  rows)
    hio.write_json(os.path.join(cfg.out, "summary.json"), {
        "command": "degrees",
        "config": {"gamma": cfg.gamma, "nu": cfg.nu, "n": cfg.n,
                   "replicas": cfg.replicas, "seed": cfg.seed,
                   "sampler": cfg.sampler, "representation": cfg.rep,
                   "k_max": cfg.k_max, "input_dir": cfg.input_dir},
        "avg_degree_empirical": report.avg_degree_empirical,
        "avg_degree_empirical_se": report.avg_degree_empirical_se,
        "avg_degree_finite_n": report.avg_degree_finite_n,
        "avg_degree_asymptotic": report.avg_degree_asymptotic,
        "tv_asymptotic": report.tv_asymptotic,
        "tv_finite_n": report.tv_finite_n,
        "tail_exponent": report.tail_exponent_estimate,
        "graphs": hist.n_graphs,
    })
    return 0


def cmd_entropy(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    rows = []
    for n in cfg.sizes:
        p = derive_params(cfg.gamma, cfg.nu, n)
        rep = gibbs_entropy_bounds(p)
        rows.append((n, f"{rep.sigma:.12e}", f"{rep.sigma_rescaled:.8f}",
                     f"{rep.gibbs_lower_rescaled:.8f}", f"{rep.gibbs_upper_rescaled:.8f}",
                     f"{rep.s_m:.8f}", rep.partition.m_n))
    hio.write_csv(os.path.join(cfg.out, "entropy.csv"),
                  ["n", "sigma", "n_sigma_over_log_n", "gibbs_lower_rescaled",
                   "gibbs_upper_rescaled", "s_m", "m_n"], rows)
    hio.write_json(os.path.join(cfg.out, "summary.json"), {
        "command": "entropy",
        "config": {"gamma": cfg.gamma, "nu": cfg.nu, "sizes": cfg.sizes},
    })
    return 0


def cmd_theory(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    p = derive_params(cfg.gamma, cfg.nu, cfg.n)
    law = DegreeLaw(p)
    pmf = law.pmf_array(cfg.k_max)
    hio.write_csv(os.path.join(cfg.out, "theory_pmf.csv"), ["k", "pmf"],
                  [(k, f"{pmf[k]:.12e}") for k in range(cfg.k_max + 1)])
    scale = p.pareto_scale
    t_hi = math.sqrt(p.nu * p.n)
    ts = np.geomspace(scale / 4.0, t_hi * 1.2, cfg.t_points)
    tail = finite_size_degree_tail(p, ts)
    hio.write_csv(os.path.join(cfg.out, "tail_curve.csv"), ["t", "tail_probability"],
                  [(f"{t:.8e}", f"{v:.10e}") for t, v in zip(ts, tail)])
    hio.write_json(os.path.join(cfg.out, "summary.json"), {
        "command": "theory",
        "config": {"gamma": cfg.gamma, "nu": cfg.nu, "n": cfg.n, "k_max": cfg.k_max},
        "expected_avg_degree_finite_n": expected_avg_degree_finite_n(p),
        "expected_avg_degree_asymptotic": p.nu,
        "r_n": p.r_n,
    })
    return 0


def cmd_scm_solve(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    if cfg.degrees_file:
        with open(cfg.degrees_file, "r", encoding="utf-8") as fh:
            k = [float(tok) for tok in fh.read().split()]
        inst = solve_scm(k, tol=cfg.tol)
        source = {"degrees_file": cfg.degrees_file}
    else:
        p = derive_params(cfg.gamma, cfg.nu, cfg.n)
        coords = sample_coordinates(p, cfg.seed)
        inst = hscm_to_scm(coords)
        source = {"gamma": cfg.gamma, "nu": cfg.nu, "n": cfg.n, "seed": cfg.seed}
    hio.write_json(os.path.join(cfg.out, "scm.json"), {
        "command": "scm-solve",
        "config": {**source, "tol": cfg.tol},
        "n": inst.n,
        "residual": inst.residual,
        "expected_degrees": [float(v) for v in inst.expected_degrees],
        "multipliers": [float(v) for v in inst.multipliers],
    })
    return 0


def cmd_ingest(cfg) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    hist = ingest_edge_list(cfg.path)
    pmf = hist.pmf()
    rows = [(k, int(hist.counts[k]), f"{pmf[k]:.10e}")
            for k in range(hist.counts.size)]
    hio.write_csv(os.path.join(cfg.out, "histogram.csv"), ["k", "count", "pmf"], rows)
    try:
        from .stats import tail_exponent_fit

        fit = tail_exponent_fit(hist)
        tail = {"alpha": fit.alpha, "k_min": fit.k_min, "ks_distance": fit.ks_distance}
    except InsufficientTailError as exc:
        tail = {"error": str(exc)}
    hio.write_json(os.path.join(cfg.out, "summary.json"), {
        "command": "ingest",
        "config": {"path": cfg.path},
        "n": hist.n,
        "edges": int(hist.counts @ np.arange(hist.counts.size)) // 2,
        "duplicates_dropped": hist.duplicates_dropped,
        "self_loops_dropped": hist.self_loops_dropped,
        "avg_degree": hist.mean_degree(),
        "tail_fit": tail,
    })
    return 0


def _add_model_args(sp, need_n=True):
    sp.add_argument("--gamma", type=float, required=True, help="power-law shape, > 1")
    sp.add_argument("--nu", type=float, required=True, help="target average degree, > 0")
    if need_n:
        sp.add_argument("--n", type=int, required=True, help="graph size")


def _add_sampling_args(sp):
    sp.add_argument("--replicas", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True,
                    help="master seed (replica seeds are derived from it)")
    sp.add_argument("--sampler", choices=["fast", "naive", "growing"], default="fast")
    sp.add_argument("--rep", choices=[r.value for r in Representation],
                    default=Representation.EXPONENTIAL.value,
                    help="coordinate representation to sample in")
    sp.add_argument("--jobs", type=int, default=1, help="parallel replica workers")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hscm",
                                 description="Sparse power-law random graphs: "
                                             "samplers, degree theory, entropy numerics")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="sample graphs to edge-list files")
    _add_model_args(sp)
    _add_sampling_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("degrees", help="degree histogram vs theory")
    _add_model_args(sp)
    _add_sampling_args(sp)
    sp.add_argument("--in", dest="input_dir", default=None,
                    help="read graphs from a generate output directory")
    sp.add_argument("--k-max", dest="k_max", type=int, default=100)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_degrees)

    sp = sub.add_parser("entropy", help="entropy scaling table over sizes")
    _add_model_args(sp, need_n=False)
    sp.add_argument("--sizes", required=True,
                    help="comma-separated increasing sizes, e.g. 1000,10000")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("theory", help="theoretical pmf, averages, tail curve")
    _add_model_args(sp)
    sp.add_argument("--k-max", dest="k_max", type=int, default=100)
    sp.add_argument("--t-points", dest="t_points", type=int, default=200)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_theory)

    sp = sub.add_parser("scm-solve", help="solve multipliers for expected degrees")
    sp.add_argument("--degrees-file", default=None,
                    help="whitespace-separated expected degrees")
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_scm_solve)

    sp = sub.add_parser("ingest", help="histogram an external edge list")
    sp.add_argument("--path", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_ingest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    cfg = ap.parse_args(argv)
    if cfg.command == "scm-solve" and cfg.degrees_file is None:
        missing = [k for k in ("gamma", "nu", "n", "seed") if getattr(cfg, k) is None]
        if missing:
            ap.error("scm-solve needs --degrees-file or all of --gamma/--nu/--n/--seed")
    if cfg.command == "entropy":
        try:
            cfg.sizes = [int(tok) for tok in cfg.sizes.split(",") if tok]
        except ValueError:
            ap.error("--sizes must be comma-separated integers")
        if not cfg.sizes or any(b <= a for a, b in zip(cfg.sizes, cfg.sizes[1:])):
            ap.error("--sizes must be strictly increasing")
    try:
        return cfg.func(cfg)
    except (DomainError, SizeGuardError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ConvergenceError, NumericalInstabilityError,
            InsufficientTailError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (OSError, EdgeListParseError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
