"""Command-line interface.

Subcommands: generate, fit, replicate, oracle, convergence, vtable.
Exit codes: 0 success, 2 invalid input, 3 runtime failure.
Reports are written as JSON/CSV with rendered PNG figures alongside.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as gio
from . import plots
from .gibbs import (PRIOR_CRP, PRIOR_MFM, SamplerConfig, pool_size, run_chain,
                    run_parallel_chains)
from .graphs import (AdjacencyMatrix, DegreeWeights, EdgeProbMatrix, Labeling,
                     balanced_sizes, generate_dcsbm, generate_sbm,
                     labeling_from_sizes, ratio_sizes)
from .posterior import (co_cluster_matrix, dahl_estimate,
                        empirical_partition_frequencies, estimate_k,
                        exact_posterior, rand_index, tv_distance)
from .prior import ComponentPmf, compute_log_v, save_table

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

_CONFIG_KEYS = {
    "gamma": float,
    "beta_a": float,
    "beta_b": float,
    "iterations": int,
    "burn_in": int,
    "init_clusters": int,
    "seed": int,
    "prior": str,
    "chains": int,
}


def _parse_prior(text: str) -> tuple[str, float]:
    if text == PRIOR_MFM:
        return PRIOR_MFM, 1.0
    if text.startswith("crp:"):
        return PRIOR_CRP, float(text.split(":", 1)[1])
    if text == PRIOR_CRP:
        return PRIOR_CRP, 1.0
    raise ValueError("--prior must be 'mfm' or 'crp:<alpha>', got %r" % text)


def _read_config_file(path) -> dict:
    """Flat 'key = value' pairs mirroring the sampler settings."""
    values = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected 'key = value', got %r" % (path, ln, raw.strip()))
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ValueError("%s:%d: unknown config key %r" % (path, ln, key))
            values[key] = _CONFIG_KEYS[key](val)
    return values


def _resolve_sampler(args, defaults: dict) -> tuple[SamplerConfig, int]:
    """Merge config-file values and CLI flags (flags win) into a SamplerConfig
    plus the chain count."""
    file_cfg = _read_config_file(args.config) if getattr(args, "config", None) else {}
    def pick(flag_value, key):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return file_cfg[key]
        return defaults[key]
    prior_text = pick(args.prior, "prior")
    mode, alpha = _parse_prior(prior_text)
    cfg = SamplerConfig(
        gamma=pick(args.gamma, "gamma"),
        beta_a=pick(args.beta_a, "beta_a"),
        beta_b=pick(args.beta_b, "beta_b"),
        iterations=pick(args.iters, "iterations"),
        burn_in=pick(args.burnin, "burn_in"),
        init_clusters=pick(args.init_clusters, "init_clusters"),
        seed=pick(args.seed, "seed"),
        prior_mode=mode,
        crp_alpha=alpha,
    )
    chains = pick(getattr(args, "chains", None), "chains")
    return cfg, int(chains)


_SAMPLER_DEFAULTS = {
    "gamma": 1.0, "beta_a": 1.0, "beta_b": 1.0, "iterations": 250,
    "burn_in": 50, "init_clusters": 9, "seed": 0, "prior": "mfm", "chains": 10,
}


def _table_for(cfg: SamplerConfig, n: int):
    if cfg.prior_mode == PRIOR_CRP:
        return None
    return compute_log_v(n, gamma=cfg.gamma)


def _outdir(args) -> str:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _rle(labels_one_based) -> str:
    parts = []
    prev = None
    count = 0
    for v in labels_one_based:
        if v == prev:
            count += 1
        else:
            if prev is not None:
                parts.append("%d*%d" % (prev, count))
            prev, count = v, 1
    parts.append("%d*%d" % (prev, count))
    return ",".join(parts)


def _write_trace(sample, path) -> None:
    with open(path, "w") as fh:
        for idx in range(sample.n_kept):
            rec = {
                "iter": int(sample.burn_in + idx + 1),
                "t": int(sample.ts[idx]),
                "z_rle": _rle((sample.zs[idx] + 1).tolist()),
                "log_lik": float(sample.log_liks[idx]),
            }
            fh.write(json.dumps(rec) + "\n")


def _spec_sizes(args) -> list[int]:
    if args.sizes:
        sizes = [int(tok) for tok in args.sizes.split(",")]
        if sum(sizes) != args.n:
            raise ValueError("--sizes sum to %d, expected n=%d" % (sum(sizes), args.n))
        if min(sizes) < 1:
            raise ValueError("--sizes entries must be >= 1")
        return sizes
    if args.unbalanced:
        return ratio_sizes(args.n, range(2, args.k + 2))
    return balanced_sizes(args.n, args.k)


def _generate_replicate(sizes, p, q, seed, dc_fraction, dc_weight):
    """One dataset: truth labeling plus an (optionally degree-corrected) draw.
    A single seeded stream drives weights then edges."""
    rng = np.random.default_rng(seed)
    z0 = labeling_from_sizes(sizes)
    q_mat = EdgeProbMatrix.homogeneous(len(sizes), p, q)
    if dc_fraction > 0:
        w = DegreeWeights.misspecified(z0.n, dc_fraction, dc_weight, seed=rng)
        A = generate_dcsbm(z0, q_mat, w, seed=rng)
    else:
        A = generate_sbm(z0, q_mat, seed=rng)
    return A, z0


def cmd_generate(args) -> int:
    if args.replicates < 1:
        raise ValueError("--replicates must be >= 1")
    if not (0 < args.p < 1 and 0 < args.q < 1):
        raise ValueError("p and q must lie in (0, 1)")
    sizes = _spec_sizes(args)
    out = _outdir(args)
    master = args.seed if args.seed is not None else 0
    files = []
    for j in range(1, args.replicates + 1):
        seed_j = master * 1_000_000 + j
        A, z0 = _generate_replicate(sizes, args.p, args.q, seed_j,
                                    args.dc_fraction if args.degree_corrected else 0.0,
                                    args.dc_weight)
        edges_name = "rep%03d.edges" % j
        labels_name = "rep%03d.labels" % j
        gio.write_edge_list(A, os.path.join(out, edges_name))
        gio.write_labels(z0, os.path.join(out, labels_name))
        files.append({"replicate": j, "seed": seed_j,
                      "edges": edges_name, "labels": labels_name})
    manifest = {
        "n": args.n, "k": len(sizes), "sizes": sizes, "p": args.p, "q": args.q,
        "replicates": args.replicates,
        "degree_corrected": bool(args.degree_corrected),
        "dc_fraction": args.dc_fraction, "dc_weight": args.dc_weight,
        "master_seed": master, "files": files,
    }
    _write_json(manifest, os.path.join(out, "manifest.json"))
    print("wrote %d replicate(s) and manifest.json to %s" % (args.replicates, out))
    return EXIT_OK


def _write_cocluster_csv(pihat, path) -> None:
    n = pihat.shape[0]
    with open(path, "w") as fh:
        fh.write(",".join("node_%d" % (i + 1) for i in range(n)) + "\n")
        for row in pihat:
            fh.write(",".join("%.6f" % v for v in row) + "\n")


def cmd_fit(args) -> int:
    A = gio.read_graph(args.graph, n=args.n)
    cfg, chains = _resolve_sampler(args, _SAMPLER_DEFAULTS)
    cfg.validate(A.n)
    table = _table_for(cfg, A.n)
    out = _outdir(args)
    samples = run_parallel_chains(A, cfg, table, chains,
                                  max_workers=args.threads)
    summary = estimate_k(samples)
    pihat = co_cluster_matrix(samples)
    record = summary.to_json_dict()
    record["chains"] = chains
    record["iterations"] = cfg.iterations
    record["burn_in"] = cfg.burn_in
    if args.truth:
        z0 = gio.read_labels(args.truth, n=A.n)
        record["rand_index_vs_truth"] = rand_index(summary.z_hat, z0)
    _write_json(record, os.path.join(out, "summary.json"))
    gio.write_labels(summary.z_hat, os.path.join(out, "z_hat.labels"))
    _write_cocluster_csv(pihat, os.path.join(out, "cocluster.csv"))
    order = np.argsort(summary.z_hat.z, kind="stable")
    plots.cocluster_heatmap(pihat, os.path.join(out, "cocluster.png"), order=order,
                            title="co-clustering (nodes ordered by estimate)")
    plots.t_histogram_figure(summary.t_histogram,
                             os.path.join(out, "k_histogram.png"),
                             title="posterior of |z|")
    if args.trace:
        if chains == 1:
            _write_trace(samples[0], args.trace)
        else:
            base, ext = os.path.splitext(args.trace)
            for c, s in enumerate(samples, start=1):
                _write_trace(s, "%s.chain%02d%s" % (base, c, ext))
    print("modal_t=%d  (per-chain modes: %s)%s"
          % (summary.modal_t, summary.per_chain_modes,
             "  [vote tied, smaller t kept]" if summary.vote_tied else ""))
    return EXIT_OK


def run_study(sizes, p, q, replicates, chains, cfg: SamplerConfig,
              degree_corrected: bool = False, dc_fraction: float = 0.3,
              dc_weight: float = 0.8, threads: int | None = None) -> dict:
    """Recovery study: per seeded replicate, generate a dataset, fit with the
    multi-chain protocol and record (recovered t, Rand index of the Dahl
    estimate vs. truth).  cfg.seed acts as the master seed: replicate j draws
    data with seed master*1e6 + j and its chains use master*1e6 + j + c for
    c = 1..chains."""
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    if not (0 < p < 1 and 0 < q < 1):
        raise ValueError("p and q must lie in (0, 1)")
    n = sum(sizes)
    cfg.validate(n)
    table = _table_for(cfg, n)
    master = cfg.seed
    true_k = len(sizes)

    def one(j: int) -> dict:
        seed_j = master * 1_000_000 + j
        A, z0 = _generate_replicate(sizes, p, q, seed_j,
                                    dc_fraction if degree_corrected else 0.0,
                                    dc_weight)
        from dataclasses import replace
        rep_cfg = replace(cfg, seed=seed_j + 1)  # chain c uses seed_j + c, c >= 1
        samples = run_parallel_chains(A, rep_cfg, table, chains, max_workers=1)
        summary = estimate_k(samples)
        return {
            "replicate": j,
            "seed": seed_j,
            "recovered_t": summary.modal_t,
            "rand_index": rand_index(summary.z_hat, z0),
            "correct": summary.modal_t == true_k,
            "vote_tied": summary.vote_tied,
        }

    workers = pool_size(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(1, replicates + 1)))
    else:
        rows = [one(j) for j in range(1, replicates + 1)]

    prop = sum(r["correct"] for r in rows) / len(rows)
    ri_correct = [r["rand_index"] for r in rows if r["correct"]]
    mean_ri = sum(ri_correct) / len(ri_correct) if ri_correct else None
    cell = "%.2f (%s)" % (prop, "%.2f" % mean_ri if mean_ri is not None else "NA")
    return {
        "config": {
            "n": n, "k": true_k, "sizes": list(sizes), "p": p, "q": q,
            "replicates": replicates, "chains": chains,
            "iterations": cfg.iterations, "burn_in": cfg.burn_in,
            "init_clusters": cfg.init_clusters, "gamma": cfg.gamma,
            "beta_a": cfg.beta_a, "beta_b": cfg.beta_b,
            "prior": cfg.prior_mode, "master_seed": master,
            "degree_corrected": bool(degree_corrected),
            "dc_fraction": dc_fraction, "dc_weight": dc_weight,
        },
        "replicates": rows,
        "proportion_correct": prop,
        "mean_ri_when_correct": mean_ri,
        "table_cell": cell,
    }


def cmd_replicate(args) -> int:
    sizes = _spec_sizes(args)
    # modal-|z| votes need the 9-cluster init transient excluded; chains on
    # n=100 settle well before iteration 150 of the 250-iteration protocol
    cfg, chains = _resolve_sampler(args, {**_SAMPLER_DEFAULTS, "burn_in": 150})
    out = _outdir(args)
    report = run_study(sizes, args.p, args.q, args.replicates, chains, cfg,
                       degree_corrected=args.degree_corrected,
                       dc_fraction=args.dc_fraction, dc_weight=args.dc_weight,
                       threads=args.threads)
    rows = report["replicates"]
    prop = report["proportion_correct"]
    mean_ri = report["mean_ri_when_correct"]
    cell = report["table_cell"]
    true_k = report["config"]["k"]
    _write_json(report, os.path.join(out, "study.json"))
    with open(os.path.join(out, "study.csv"), "w") as fh:
        fh.write("replicate,seed,recovered_t,rand_index,correct\n")
        for r in rows:
            fh.write("%d,%d,%d,%.6f,%d\n" % (r["replicate"], r["seed"],
                                             r["recovered_t"], r["rand_index"],
                                             int(r["correct"])))
    with open(os.path.join(out, "table.txt"), "w") as fh:
        fh.write("K=%d, p=%.2f   %s\n" % (true_k, args.p, cell))
        fh.write("proportion correct : %.3f\n" % prop)
        fh.write("mean RI | correct  : %s\n" % ("%.3f" % mean_ri if mean_ri is not None else "NA"))
    plots.replicate_histogram_figure([r["recovered_t"] for r in rows], true_k,
                                     os.path.join(out, "k_histogram.png"),
                                     title="recovered k across replicates")
    print("K=%d p=%.2f replicates=%d -> %s" % (true_k, args.p, len(rows), cell))
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.n > 8:
        raise ValueError("oracle validation is limited to n <= 8")
    cfg, _ = _resolve_sampler(args, {**_SAMPLER_DEFAULTS,
                                     "iterations": 200_000, "burn_in": 0,
                                     "init_clusters": 4, "chains": 1})
    if cfg.iterations <= cfg.burn_in:
        raise ValueError("oracle run keeps no draws; empirical frequencies "
                         "would reflect nothing (use iterations > burn-in)")
    if args.graph_file:
        A = gio.read_graph(args.graph_file, n=args.n)
        graph_desc = os.path.basename(args.graph_file)
    elif args.graph == "empty":
        A = AdjacencyMatrix(np.zeros((args.n, args.n), dtype=int))
        graph_desc = "empty"
    elif args.graph == "complete":
        A = AdjacencyMatrix(np.ones((args.n, args.n), dtype=int) - np.eye(args.n, dtype=int))
        graph_desc = "complete"
    else:
        sizes = balanced_sizes(args.n, args.k)
        A, _ = _generate_replicate(sizes, args.p, args.q,
                                   (cfg.seed or 0) * 1_000_000 + 1, 0.0, 1.0)
        graph_desc = "sbm(k=%d,p=%g,q=%g)" % (args.k, args.p, args.q)
    cfg.validate(A.n)
    table = _table_for(cfg, A.n)
    out = _outdir(args)
    sample = run_chain(A, cfg, table)
    exact = exact_posterior(A, cfg, table)
    emp = empirical_partition_frequencies(sample)
    tv = tv_distance(exact, emp)
    report = {
        "n": A.n, "graph": graph_desc, "iterations": cfg.iterations,
        "tv_distance": tv, "n_partitions": len(exact),
        "config": {"gamma": cfg.gamma, "beta_a": cfg.beta_a, "beta_b": cfg.beta_b,
                   "prior": cfg.prior_mode, "seed": cfg.seed,
                   "burn_in": cfg.burn_in, "init_clusters": cfg.init_clusters},
    }
    _write_json(report, os.path.join(out, "oracle.json"))
    with open(os.path.join(out, "partitions.csv"), "w") as fh:
        fh.write("partition,exact_probability,empirical_frequency\n")
        for key in sorted(exact, key=lambda k: -exact[k]):
            fh.write("%s,%.8g,%.8g\n" % ("".join(str(v + 1) for v in key),
                                         exact[key], emp.get(key, 0.0)))
    plots.oracle_comparison_figure(exact, emp, os.path.join(out, "oracle.png"))
    print("n=%d %s: TV(sampler, exact) = %.4f over %d partitions"
          % (A.n, graph_desc, tv, len(exact)))
    return EXIT_OK


def cmd_convergence(args) -> int:
    cfg, _ = _resolve_sampler(args, {**_SAMPLER_DEFAULTS,
                                     "iterations": 100, "burn_in": 0, "chains": 1})
    if args.graph_file:
        if not args.truth:
            raise ValueError("--truth is required with --graph-file")
        A = gio.read_graph(args.graph_file, n=args.n)
        z0 = gio.read_labels(args.truth, n=A.n)
    else:
        sizes = _spec_sizes(args)
        A, z0 = _generate_replicate(sizes, args.p, args.q,
                                    cfg.seed * 1_000_000, 0.0, 1.0)
    cfg.validate(A.n)
    table = _table_for(cfg, A.n)
    out = _outdir(args)
    from dataclasses import replace
    traces = []
    for s in range(1, args.starts + 1):
        run_cfg = replace(cfg, seed=cfg.seed * 1_000_000 + s, burn_in=0)
        sample = run_chain(A, run_cfg, table)
        ri = np.array([rand_index(Labeling(np.asarray(row, dtype=np.int64)), z0)
                       for row in sample.zs])
        traces.append((s, ri))
    with open(os.path.join(out, "convergence.csv"), "w") as fh:
        fh.write("start,iteration,rand_index\n")
        for s, ri in traces:
            for it, v in enumerate(ri, start=1):
                fh.write("%d,%d,%.6f\n" % (s, it, v))
    plots.convergence_figure(traces, os.path.join(out, "convergence.png"),
                             title="n=%d" % A.n)
    final = ", ".join("%.3f" % ri[-1] for _, ri in traces)
    print("wrote %d start trace(s); final Rand index: %s" % (len(traces), final))
    return EXIT_OK


def cmd_vtable(args) -> int:
    gamma = args.gamma if args.gamma is not None else 1.0
    pmf = ComponentPmf.truncated_poisson(args.pmf_rate)
    table = compute_log_v(args.n, t_max=args.t_max, gamma=gamma, pmf=pmf)
    out = _outdir(args)
    save_table(table, os.path.join(out, "vtable.json"))
    with open(os.path.join(out, "vtable.csv"), "w") as fh:
        fh.write("t,log_v\n")
        for t in range(1, table.t_max + 1):
            fh.write("%d,%.12g\n" % (t, table.log_v[t]))
    print("wrote log V_%d(t) for t = 1..%d" % (args.n, table.t_max))
    return EXIT_OK


def _add_sampler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master RNG seed")
    p.add_argument("--gamma", type=float, default=None, help="Dirichlet concentration")
    p.add_argument("--beta-a", type=float, default=None, dest="beta_a",
                   help="Beta prior shape a for block probabilities")
    p.add_argument("--beta-b", type=float, default=None, dest="beta_b",
                   help="Beta prior shape b for block probabilities")
    p.add_argument("--iters", type=int, default=None, help="MCMC iterations")
    p.add_argument("--burnin", type=int, default=None, help="burn-in iterations")
    p.add_argument("--chains", type=int, default=None, help="number of chains")
    p.add_argument("--init-clusters", type=int, default=None, dest="init_clusters",
                   help="clusters in the random initial configuration")
    p.add_argument("--prior", type=str, default=None,
                   help="partition prior: 'mfm' or 'crp:<alpha>'")
    p.add_argument("--threads", type=int, default=None,
                   help="worker pool size (MFM_SBM_THREADS overrides)")
    p.add_argument("--out", type=str, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfmsbm",
        description="Simultaneous Bayesian inference of the number of "
                    "communities and the memberships in a network.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write synthetic replicate datasets")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--sizes", type=str, default=None,
                   help="explicit comma-separated community sizes")
    g.add_argument("--unbalanced", action="store_true",
                   help="community sizes in ratio 2:3:...:(k+1)")
    g.add_argument("--p", type=float, default=0.5, help="within-community edge probability")
    g.add_argument("--q", type=float, default=0.10, help="between-community edge probability")
    g.add_argument("--replicates", type=int, default=1)
    g.add_argument("--degree-corrected", action="store_true")
    g.add_argument("--dc-fraction", type=float, default=0.3)
    g.add_argument("--dc-weight", type=float, default=0.8)
    _add_sampler_flags(g)
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("fit", help="fit a network from an edge list or adjacency CSV")
    f.add_argument("graph", help="edge-list or adjacency-CSV file")
    f.add_argument("--n", type=int, default=None,
                   help="node count (default: largest id in the edge list)")
    f.add_argument("--config", type=str, default=None,
                   help="flat key=value sampler config file (flags override)")
    f.add_argument("--truth", type=str, default=None,
                   help="reference labels; adds a Rand index to the summary")
    f.add_argument("--trace", type=str, default=None,
                   help="write per-iteration NDJSON trace(s) here")
    _add_sampler_flags(f)
    f.set_defaults(func=cmd_fit)

    r = sub.add_parser("replicate", help="recovery study over seeded replicates")
    r.add_argument("--n", type=int, default=100)
    r.add_argument("--k", type=int, default=3)
    r.add_argument("--sizes", type=str, default=None)
    r.add_argument("--unbalanced", action="store_true")
    r.add_argument("--p", type=float, default=0.5)
    r.add_argument("--q", type=float, default=0.10)
    r.add_argument("--replicates", type=int, default=20)
    r.add_argument("--degree-corrected", action="store_true")
    r.add_argument("--dc-fraction", type=float, default=0.3)
    r.add_argument("--dc-weight", type=float, default=0.8)
    _add_sampler_flags(r)
    r.set_defaults(func=cmd_replicate)

    o = sub.add_parser("oracle", help="compare the sampler to the exact posterior (n <= 8)")
    o.add_argument("--n", type=int, default=8)
    o.add_argument("--graph", choices=["sbm", "empty", "complete"], default="sbm")
    o.add_argument("--graph-file", type=str, default=None,
                   help="load the graph instead of generating one")
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--p", type=float, default=0.9)
    o.add_argument("--q", type=float, default=0.1)
    _add_sampler_flags(o)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("convergence", help="Rand-index traces from random starts")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--k", type=int, default=3)
    c.add_argument("--sizes", type=str, default=None)
    c.add_argument("--unbalanced", action="store_true")
    c.add_argument("--p", type=float, default=0.5)
    c.add_argument("--q", type=float, default=0.10)
    c.add_argument("--starts", type=int, default=5)
    c.add_argument("--graph-file", type=str, default=None)
    c.add_argument("--truth", type=str, default=None)
    _add_sampler_flags(c)
    c.set_defaults(func=cmd_convergence)

    v = sub.add_parser("vtable", help="dump the log V_n(t) coefficient table")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--t-max", type=int, default=None, dest="t_max")
    v.add_argument("--pmf-rate", type=float, default=1.0,
                   help="rate of the truncated-Poisson component prior")
    _add_sampler_flags(v)
    v.set_defaults(func=cmd_vtable)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # pragma: no cover - defensive
        print("runtime failure: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
