"""Posterior summaries and evaluation: Rand index, permutation-invariant
Hamming distance, co-clustering, Dahl's modal point estimate, k estimation
by majority vote, and the exact enumerated posterior for small n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import betaln, logsumexp

from .gibbs import PRIOR_CRP, PosteriorSample, SamplerConfig
from .graphs import AdjacencyMatrix, Labeling, block_counts
from .prior import (MfmPriorTable, crp_log_partition_prior, enumerate_rgs,
                    log_partition_prior)

__all__ = [
    "rand_index",
    "perm_hamming",
    "co_cluster_matrix",
    "dahl_estimate",
    "FitSummary",
    "estimate_k",
    "exact_posterior",
    "tv_distance",
    "empirical_partition_frequencies",
    "modal_partition",
]

_ORACLE_MAX_N = 8


def _as_label_array(z) -> np.ndarray:
    return z.z if isinstance(z, Labeling) else np.asarray(z, dtype=np.int64)


def rand_index(z1, z2) -> float:
    """Fraction of node pairs on which the two partitions agree."""
    a1, a2 = _as_label_array(z1), _as_label_array(z2)
    if a1.size != a2.size:
        raise ValueError("labelings have different lengths (%d vs %d)"
                         % (a1.size, a2.size))
    n = a1.size
    if n < 2:
        raise ValueError("need at least 2 nodes")
    t1, t2 = int(a1.max()) + 1, int(a2.max()) + 1
    cont = np.zeros((t1, t2), dtype=np.int64)
    np.add.at(cont, (a1, a2), 1)
    same_both = (cont * (cont - 1) // 2).sum()
    same_1 = (cont.sum(1) * (cont.sum(1) - 1) // 2).sum()
    same_2 = (cont.sum(0) * (cont.sum(0) - 1) // 2).sum()
    total = n * (n - 1) // 2
    concordant = total + 2 * same_both - same_1 - same_2
    return float(concordant / total)


def perm_hamming(z1, z2, k: int | None = None) -> int:
    """min over label permutations of the Hamming distance between z1 and z2.

    Solved as a maximum-agreement linear assignment on the k x k confusion
    matrix: d = n - max assignment.
    """
    a1, a2 = _as_label_array(z1), _as_label_array(z2)
    if a1.size != a2.size:
        raise ValueError("labelings have different lengths (%d vs %d)"
                         % (a1.size, a2.size))
    hi = int(max(a1.max(), a2.max())) + 1
    if k is None:
        k = hi
    elif hi > k:
        raise ValueError("labels exceed the stated label-space size k=%d" % k)
    cont = np.zeros((k, k), dtype=np.int64)
    np.add.at(cont, (a1, a2), 1)
    rows, cols = linear_sum_assignment(cont, maximize=True)
    return int(a1.size - cont[rows, cols].sum())


def _pooled(samples) -> list[PosteriorSample]:
    if isinstance(samples, PosteriorSample):
        return [samples]
    out = list(samples)
    if not out:
        raise ValueError("no posterior samples given")
    return out


def co_cluster_matrix(samples, thinning: int = 1) -> np.ndarray:
    """pi_hat[i, j]: fraction of kept draws with z_i = z_j (pooled over chains)."""
    chains = _pooled(samples)
    n = chains[0].n
    acc = np.zeros((n, n))
    count = 0
    for ch in chains:
        zs = ch.zs[::thinning]
        for row in zs:
            acc += row[:, None] == row[None, :]
            count += 1
    if count == 0:
        raise ValueError("no kept draws to summarize")
    return acc / count


def dahl_estimate(samples, thinning: int = 1) -> Labeling:
    """Kept draw minimizing the squared loss to the co-clustering matrix.

    Ties break toward the earliest draw (chain order, then iteration).
    """
    chains = _pooled(samples)
    pihat = co_cluster_matrix(chains, thinning=thinning)
    best = None
    best_loss = np.inf
    # the loss depends only on the partition, so score each distinct one once
    seen: dict[bytes, float] = {}
    for ch in chains:
        for row in ch.canonical_zs()[::thinning]:
            key = row.tobytes()
            loss = seen.get(key)
            if loss is None:
                b = row[:, None] == row[None, :]
                loss = ((b - pihat) ** 2).sum() / 2  # i < j pairs; diagonal is 0
                seen[key] = loss
            if loss < best_loss:
                best_loss = loss
                best = row
    return Labeling(best.astype(np.int64))


@dataclass
class FitSummary:
    """Point estimates assembled from one or more chains."""

    modal_t: int
    z_hat: Labeling
    t_histogram: dict[int, int]
    per_chain_modes: list[int]
    vote_tied: bool = False

    def to_json_dict(self) -> dict:
        return {
            "modal_t": self.modal_t,
            "t_histogram": {str(k): v for k, v in sorted(self.t_histogram.items())},
            "z_hat": self.z_hat.to_one_based().tolist(),
            "per_chain_modes": self.per_chain_modes,
            "vote_tied": self.vote_tied,
        }


def _modal(values) -> int:
    vals, counts = np.unique(np.asarray(values), return_counts=True)
    return int(vals[counts == counts.max()].min())  # ties -> smaller t


def estimate_k(samples, thinning: int = 1) -> FitSummary:
    """Per-chain modal |z| then majority vote across chains (ties -> smaller
    t, flagged); z_hat is the Dahl estimate over the pooled draws."""
    chains = _pooled(samples)
    per_chain = []
    hist: dict[int, int] = {}
    for ch in chains:
        ts = ch.ts[::thinning]
        if ts.size == 0:
            raise ValueError("a chain has no kept draws")
        per_chain.append(_modal(ts))
        for v, c in zip(*np.unique(ts, return_counts=True)):
            hist[int(v)] = hist.get(int(v), 0) + int(c)
    votes, counts = np.unique(per_chain, return_counts=True)
    winners = votes[counts == counts.max()]
    modal_t = int(winners.min())
    z_hat = dahl_estimate(chains, thinning=thinning)
    return FitSummary(modal_t=modal_t, z_hat=z_hat, t_histogram=hist,
                      per_chain_modes=[int(v) for v in per_chain],
                      vote_tied=len(winners) > 1)


def exact_posterior(A: AdjacencyMatrix, cfg: SamplerConfig,
                    table: MfmPriorTable | None = None) -> dict[tuple[int, ...], float]:
    """Exact posterior over all partitions of n <= 8 nodes, with Q integrated
    out per block pair (Beta-binomial conjugacy).  Keys are restricted growth
    strings."""
    n = A.n
    if n > _ORACLE_MAX_N:
        raise ValueError("exact posterior enumeration refused for n=%d > %d"
                         % (n, _ORACLE_MAX_N))
    cfg.validate()
    a, b = cfg.beta_a, cfg.beta_b
    lbeta_ab = betaln(a, b)
    keys = []
    logps = []
    for rgs in enumerate_rgs(n):
        z = Labeling(np.asarray(rgs, dtype=np.int64))
        if cfg.prior_mode == PRIOR_CRP:
            lp = crp_log_partition_prior(cfg.crp_alpha, z)
        else:
            if table is None:
                raise ValueError("MFM mode needs a prior table")
            lp = log_partition_prior(table, z)
        tall = block_counts(A, z)
        t = z.t
        iu, ju = np.triu_indices(t)
        e = tall.edges[iu, ju]
        m = tall.pairs[iu, ju]
        lp += float((betaln(e + a, m - e + b) - lbeta_ab).sum())
        keys.append(rgs)
        logps.append(lp)
    logps = np.asarray(logps)
    probs = np.exp(logps - logsumexp(logps))
    probs /= probs.sum()
    return dict(zip(keys, probs.tolist()))


def empirical_partition_frequencies(samples) -> dict[tuple[int, ...], float]:
    """Relative frequency of each sampled partition (pooled over chains)."""
    chains = _pooled(samples)
    counts: dict[tuple[int, ...], int] = {}
    total = 0
    for ch in chains:
        for key, c in ch.partition_counts().items():
            counts[key] = counts.get(key, 0) + c
            total += c
    return {k: v / total for k, v in counts.items()}


def tv_distance(p: dict, q: dict) -> float:
    """Total variation distance between two partition distributions."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def modal_partition(post: dict[tuple[int, ...], float]) -> tuple[int, ...]:
    return max(post.items(), key=lambda kv: kv[1])[0]
