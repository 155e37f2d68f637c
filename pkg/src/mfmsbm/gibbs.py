"""Collapsed Gibbs sampler: conjugate Q refresh alternating with urn-based
single-node membership updates whose new-cluster weight integrates Q out.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import betaln

from . import _kernels as K
from .graphs import AdjacencyMatrix, Labeling, block_counts
from .prior import MfmPriorTable

__all__ = [
    "SamplerConfig",
    "ChainState",
    "PosteriorSample",
    "init_state",
    "update_q",
    "update_z_one",
    "assignment_probabilities",
    "m_new_cluster",
    "run_chain",
    "run_parallel_chains",
    "pool_size",
]

PRIOR_MFM = "mfm"
PRIOR_CRP = "crp"


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings.  Defaults follow the simulation protocol:
    gamma = 1, Beta(1, 1) edge priors, 9 initial clusters."""

    gamma: float = 1.0
    beta_a: float = 1.0
    beta_b: float = 1.0
    iterations: int = 250
    burn_in: int = 0
    init_clusters: int = 9
    seed: int = 0
    prior_mode: str = PRIOR_MFM
    crp_alpha: float = 1.0
    random_sweep: bool = False
    record_q: bool = False

    def validate(self, n: int | None = None) -> None:
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.beta_a <= 0 or self.beta_b <= 0:
            raise ValueError("Beta prior shapes must be positive")
        if self.iterations < 0 or self.burn_in < 0 or self.iterations < self.burn_in:
            raise ValueError("need iterations >= burn_in >= 0")
        if self.prior_mode not in (PRIOR_MFM, PRIOR_CRP):
            raise ValueError("prior_mode must be %r or %r" % (PRIOR_MFM, PRIOR_CRP))
        if self.prior_mode == PRIOR_CRP and self.crp_alpha <= 0:
            raise ValueError("crp_alpha must be positive")
        if self.init_clusters < 1:
            raise ValueError("init_clusters must be >= 1")
        if n is not None and self.init_clusters > n:
            raise ValueError("init_clusters=%d exceeds n=%d" % (self.init_clusters, n))


class ChainState:
    """Mutable sampler state, confined to a single chain.

    Arrays are allocated at capacity n; the live part is the leading t
    labels/rows.  `q`, `labeling` etc. expose trimmed copies.
    """

    __slots__ = ("n", "t", "z", "sizes", "Q", "logQ", "log1mQ", "pairs",
                 "edges", "rng", "iteration")

    def __init__(self, n, t, z, sizes, Q, logQ, log1mQ, pairs, edges, rng):
        self.n = n
        self.t = t
        self.z = z
        self.sizes = sizes
        self.Q = Q
        self.logQ = logQ
        self.log1mQ = log1mQ
        self.pairs = pairs
        self.edges = edges
        self.rng = rng
        self.iteration = 0

    @property
    def labeling(self) -> Labeling:
        return Labeling(self.z.copy())

    @property
    def q(self) -> np.ndarray:
        """Current block edge probabilities (t x t copy)."""
        return self.Q[: self.t, : self.t].copy()

    def check_consistency(self, A: AdjacencyMatrix) -> None:
        """Assert the state invariants against a fresh recount."""
        t = self.t
        assert t == int(self.z.max()) + 1 and self.z.min() >= 0, "labels not contiguous"
        recount = block_counts(A, Labeling(self.z.copy()))
        assert np.array_equal(self.pairs[:t, :t], recount.pairs), "pair tallies stale"
        assert np.array_equal(self.edges[:t, :t], recount.edges), "edge tallies stale"
        assert np.array_equal(self.sizes[:t], np.bincount(self.z, minlength=t)), "sizes stale"
        assert np.array_equal(self.Q[:t, :t], self.Q[:t, :t].T), "Q not symmetric"


class PosteriorSample:
    """Recorded draws from one chain: z, t = |z| and the data log-likelihood
    per kept iteration, plus Q when requested."""

    __slots__ = ("zs", "ts", "log_liks", "qs", "seed", "burn_in")

    def __init__(self, zs, ts, log_liks, qs=None, seed=None, burn_in=0):
        self.zs = zs
        self.ts = ts
        self.log_liks = log_liks
        self.qs = qs
        self.seed = seed
        self.burn_in = burn_in

    @property
    def n(self) -> int:
        return self.zs.shape[1]

    @property
    def n_kept(self) -> int:
        return self.zs.shape[0]

    def canonical_zs(self) -> np.ndarray:
        """Kept labelings relabeled to restricted growth strings."""
        if self.n_kept == 0:
            return self.zs.copy()
        return K.canonicalize_batch(self.zs)

    def partition_counts(self) -> dict[tuple[int, ...], int]:
        counts: dict[tuple[int, ...], int] = {}
        for row in map(tuple, self.canonical_zs().tolist()):
            counts[row] = counts.get(row, 0) + 1
        return counts

    def t_histogram(self) -> dict[int, int]:
        vals, cnt = np.unique(self.ts, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, cnt)}


def _log_v_for(cfg: SamplerConfig, table: MfmPriorTable | None, n: int) -> np.ndarray:
    if cfg.prior_mode == PRIOR_CRP:
        return np.zeros(n + 2)  # unused by the CRP branch
    if table is None:
        raise ValueError("MFM mode needs a precomputed prior table")
    if table.n != n:
        raise ValueError("prior table built for n=%d, data has n=%d" % (table.n, n))
    if table.gamma != cfg.gamma:
        raise ValueError("table gamma=%g != config gamma=%g" % (table.gamma, cfg.gamma))
    return np.asarray(table.log_v, dtype=np.float64).copy()


def init_state(A: AdjacencyMatrix, cfg: SamplerConfig,
               rng: np.random.Generator | None = None) -> ChainState:
    """Random start: nodes assigned uniformly to `init_clusters` clusters
    (empties dropped), Q drawn from the Beta prior."""
    cfg.validate(A.n)
    n = A.n
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    raw = rng.integers(0, cfg.init_clusters, size=n)
    # compact to contiguous labels in first-occurrence order
    mapping: dict[int, int] = {}
    z = np.empty(n, dtype=np.int64)
    for i, lab in enumerate(raw.tolist()):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        z[i] = mapping[lab]
    t = len(mapping)
    sizes = np.zeros(n, dtype=np.int64)
    sizes[:t] = np.bincount(z, minlength=t)
    Q = np.zeros((n, n))
    logQ = np.zeros((n, n))
    log1mQ = np.zeros((n, n))
    for r in range(t):
        for s in range(r, t):
            K._set_q(Q, logQ, log1mQ, r, s, rng.beta(cfg.beta_a, cfg.beta_b))
    tall = block_counts(A, Labeling(z.copy()))
    pairs = np.zeros((n, n), dtype=np.int64)
    edges = np.zeros((n, n), dtype=np.int64)
    pairs[:t, :t] = tall.pairs
    edges[:t, :t] = tall.edges
    return ChainState(n, t, z, sizes, Q, logQ, log1mQ, pairs, edges, rng)


def update_q(state: ChainState, A: AdjacencyMatrix, cfg: SamplerConfig) -> ChainState:
    """Redraw every block probability from its conjugate Beta posterior."""
    occ = np.zeros(state.n, dtype=np.int64)
    K._update_q(state.z, state.sizes, state.t, state.Q, state.logQ,
                state.log1mQ, state.pairs, state.edges,
                cfg.beta_a, cfg.beta_b, state.rng, state.n, occ)
    return state


def update_z_one(state: ChainState, i: int, A: AdjacencyMatrix,
                 cfg: SamplerConfig, table: MfmPriorTable | None) -> ChainState:
    """Resample the membership of node i from its collapsed conditional."""
    if not 0 <= i < state.n:
        raise ValueError("node index %d out of range" % i)
    log_v = _log_v_for(cfg, table, state.n)
    n = state.n
    e = np.zeros(n, dtype=np.int64)
    occ = np.zeros(n, dtype=np.int64)
    logw = np.zeros(n + 1)
    crp = cfg.prior_mode == PRIOR_CRP
    state.t = K._update_z_one(
        A.matrix, state.z, state.sizes, state.t, state.Q, state.logQ,
        state.log1mQ, state.pairs, state.edges, log_v,
        cfg.gamma, cfg.beta_a, cfg.beta_b, K._lbeta(cfg.beta_a, cfg.beta_b),
        crp, cfg.crp_alpha, state.rng, i, n, e, occ, logw)
    return state


def assignment_probabilities(state: ChainState, i: int, A: AdjacencyMatrix,
                             cfg: SamplerConfig, table: MfmPriorTable | None):
    """Normalized reseating distribution for node i without consuming RNG.

    Returns (cluster labels in first-occurrence order + [-1 for "new"],
    probabilities).  Operates on a scratch copy of the state.
    """
    log_v = _log_v_for(cfg, table, state.n)
    n = state.n
    z = state.z.copy()
    sizes = state.sizes.copy()
    Q = state.Q.copy()
    logQ = state.logQ.copy()
    log1mQ = state.log1mQ.copy()
    pairs = state.pairs.copy()
    edges = state.edges.copy()
    e = np.zeros(n, dtype=np.int64)
    occ = np.zeros(n, dtype=np.int64)
    logw = np.zeros(n + 1)
    t = K._detach(A.matrix, z, sizes, state.t, Q, logQ, log1mQ, pairs, edges, i, n, e)
    crp = cfg.prior_mode == PRIOR_CRP
    K._assignment_logw(z, sizes, t, logQ, log1mQ, e, log_v,
                       cfg.gamma, cfg.beta_a, cfg.beta_b,
                       K._lbeta(cfg.beta_a, cfg.beta_b), crp, cfg.crp_alpha,
                       n, i, occ, logw)
    lw = logw[: t + 1]
    p = np.exp(lw - lw.max())
    p /= p.sum()
    options = np.concatenate([occ[:t], [-1]])
    return options, p


def m_new_cluster(i: int, A: AdjacencyMatrix, z_minus_i, cfg: SamplerConfig) -> float:
    """log m(A_i): Beta-marginal of node i's edges into each existing cluster
    of z_minus_i (the labeling of the other n-1 nodes, in node order)."""
    others = np.delete(np.arange(A.n), i)
    z = z_minus_i.z if isinstance(z_minus_i, Labeling) else np.asarray(z_minus_i)
    if z.size != A.n - 1:
        raise ValueError("z_minus_i must label the remaining %d nodes" % (A.n - 1))
    if z.size == 0:
        return 0.0
    row = A.matrix[i, others].astype(np.float64)
    t = int(z.max()) + 1
    e = np.bincount(z, weights=row, minlength=t)
    m = np.bincount(z, minlength=t)
    a, b = cfg.beta_a, cfg.beta_b
    return float((betaln(e + a, m - e + b) - betaln(a, b)).sum())


def run_chain(A: AdjacencyMatrix, cfg: SamplerConfig,
              table: MfmPriorTable | None = None) -> PosteriorSample:
    """Run one chain; deterministic given (A, cfg, table)."""
    cfg.validate(A.n)
    log_v = _log_v_for(cfg, table, A.n)
    state = init_state(A, cfg)
    n = A.n
    kept = cfg.iterations - cfg.burn_in
    zs = np.zeros((kept, n), dtype=np.int32)
    ts = np.zeros(kept, dtype=np.int32)
    lls = np.zeros(kept)
    crp = cfg.prior_mode == PRIOR_CRP
    if not cfg.record_q:
        state.t = K._run_chain(
            A.matrix, state.z, state.sizes, state.t, state.Q, state.logQ,
            state.log1mQ, state.pairs, state.edges, log_v,
            cfg.gamma, cfg.beta_a, cfg.beta_b, crp, cfg.crp_alpha, state.rng,
            cfg.iterations, cfg.burn_in, cfg.random_sweep, zs, ts, lls)
        state.iteration = cfg.iterations
        return PosteriorSample(zs, ts, lls, seed=cfg.seed, burn_in=cfg.burn_in)
    # step-by-step path (identical draws; also stores Q per kept iteration)
    qs = []
    e = np.zeros(n, dtype=np.int64)
    occ = np.zeros(n, dtype=np.int64)
    logw = np.zeros(n + 1)
    order = np.arange(n)
    lbeta_ab = K._lbeta(cfg.beta_a, cfg.beta_b)
    k = 0
    for it in range(cfg.iterations):
        K._update_q(state.z, state.sizes, state.t, state.Q, state.logQ,
                    state.log1mQ, state.pairs, state.edges,
                    cfg.beta_a, cfg.beta_b, state.rng, n, occ)
        if cfg.random_sweep:
            for j in range(n - 1, 0, -1):
                r = int(state.rng.random() * (j + 1))
                r = min(r, j)
                order[j], order[r] = order[r], order[j]
        for i in order:
            state.t = K._update_z_one(
                A.matrix, state.z, state.sizes, state.t, state.Q, state.logQ,
                state.log1mQ, state.pairs, state.edges, log_v,
                cfg.gamma, cfg.beta_a, cfg.beta_b, lbeta_ab,
                crp, cfg.crp_alpha, state.rng, int(i), n, e, occ, logw)
        state.iteration = it + 1
        if it >= cfg.burn_in:
            zs[k] = state.z
            ts[k] = state.t
            lls[k] = K._loglik_from_tallies(state.t, state.logQ, state.log1mQ,
                                            state.pairs, state.edges)
            qs.append(state.q)
            k += 1
    return PosteriorSample(zs, ts, lls, qs=qs, seed=cfg.seed, burn_in=cfg.burn_in)


def pool_size(flag: int | None = None) -> int:
    """Worker count: MFM_SBM_THREADS env var overrides, then the flag,
    then the available cores."""
    env = os.environ.get("MFM_SBM_THREADS")
    if env:
        return max(1, int(env))
    if flag is not None:
        return max(1, flag)
    return os.cpu_count() or 1


def run_parallel_chains(A: AdjacencyMatrix, cfg: SamplerConfig,
                        table: MfmPriorTable | None, n_chains: int,
                        max_workers: int | None = None) -> list[PosteriorSample]:
    """Independent chains; chain j uses seed cfg.seed + j.  Results are
    returned in chain order regardless of completion order."""
    if n_chains < 1:
        raise ValueError("n_chains must be >= 1")
    cfgs = [replace(cfg, seed=cfg.seed + j) for j in range(n_chains)]
    workers = min(n_chains, pool_size(max_workers))
    if workers == 1:
        return [run_chain(A, c, table) for c in cfgs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_chain, A, c, table) for c in cfgs]
        return [f.result() for f in futures]
