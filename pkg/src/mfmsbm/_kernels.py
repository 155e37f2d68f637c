"""Numba kernels for the collapsed Gibbs sweep.

State layout: capacity-n arrays (z, sizes) and capacity n x n tables
(Q, logQ, log1mQ, pairs, edges); only the leading t entries/rows are live.
Every per-cluster RNG draw and the z-update categorical consume randomness
in first-occurrence cluster order, which is invariant under label
permutations of the state.
"""

import math

import numpy as np
from numba import njit

LOG_TINY = math.log(1e-300)  # Q clamped away from {0,1} for logging only


@njit(cache=True, nogil=True)
def _lbeta(x, y):
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


@njit(cache=True, nogil=True)
def _safe_log(q):
    if q < 1e-300:
        return LOG_TINY
    return math.log(q)


@njit(cache=True, nogil=True)
def _set_q(Q, logQ, log1mQ, r, s, val):
    lq = _safe_log(val)
    l1 = _safe_log(1.0 - val)
    Q[r, s] = val
    Q[s, r] = val
    logQ[r, s] = lq
    logQ[s, r] = lq
    log1mQ[r, s] = l1
    log1mQ[s, r] = l1


@njit(cache=True, nogil=True)
def _occ_order(z, n, t, skip, occ):
    """Fill occ[:t] with cluster labels in order of first occurrence in z."""
    found = np.zeros(t, np.uint8)
    m = 0
    for j in range(n):
        if j == skip:
            continue
        c = z[j]
        if found[c] == 0:
            found[c] = 1
            occ[m] = c
            m += 1
            if m == t:
                break
    return m


@njit(cache=True, nogil=True)
def _edge_counts(A, z, n, t, i, e):
    """e[c] = edges between node i and current members of cluster c."""
    for c in range(t):
        e[c] = 0
    for j in range(n):
        c = z[j]
        if c >= 0 and A[i, j] != 0:
            e[c] += 1


@njit(cache=True, nogil=True)
def _detach(A, z, sizes, t, Q, logQ, log1mQ, pairs, edges, i, n, e):
    """Remove node i, updating tallies in O(t); fills e over the remaining
    nodes.  An emptied cluster is compacted by moving label t-1 into the gap.
    Returns the new t."""
    _edge_counts(A, z, n, t, i, e)
    c_old = z[i]
    for s in range(t):
        if s == c_old:
            continue
        pairs[c_old, s] -= sizes[s]
        pairs[s, c_old] = pairs[c_old, s]
        edges[c_old, s] -= e[s]
        edges[s, c_old] = edges[c_old, s]
    pairs[c_old, c_old] -= sizes[c_old] - 1
    edges[c_old, c_old] -= e[c_old]
    sizes[c_old] -= 1
    z[i] = -1
    if sizes[c_old] == 0:
        last = t - 1
        if c_old != last:
            for j in range(n):
                if z[j] == last:
                    z[j] = c_old
            sizes[c_old] = sizes[last]
            e[c_old] = e[last]
            for s in range(t):
                Q[c_old, s] = Q[last, s]
                logQ[c_old, s] = logQ[last, s]
                log1mQ[c_old, s] = log1mQ[last, s]
                pairs[c_old, s] = pairs[last, s]
                edges[c_old, s] = edges[last, s]
            for s in range(t):
                # the (c_old, c_old) diagonal picks up the old (last, last)
                # through the row copy above
                Q[s, c_old] = Q[s, last]
                logQ[s, c_old] = logQ[s, last]
                log1mQ[s, c_old] = log1mQ[s, last]
                pairs[s, c_old] = pairs[s, last]
                edges[s, c_old] = edges[s, last]
        t -= 1
    return t


@njit(cache=True, nogil=True)
def _assignment_logw(z, sizes, t, logQ, log1mQ, e, log_v, gamma, a, b,
                     lbeta_ab, crp, alpha, n, i, occ, logw):
    """Unnormalized log weights for reseating node i: logw[m] for the cluster
    occ[m], m < t, and logw[t] for a new cluster."""
    _occ_order(z, n, t, i, occ)
    for m in range(t):
        c = occ[m]
        if crp:
            acc = math.log(float(sizes[c]))
        else:
            acc = math.log(sizes[c] + gamma)
        for m2 in range(t):
            s = occ[m2]
            es = e[s]
            acc += es * logQ[c, s] + (sizes[s] - es) * log1mQ[c, s]
        logw[m] = acc
    if crp:
        lp = math.log(alpha)
    else:
        if log_v[t + 1] == -np.inf:
            logw[t] = -np.inf
            return
        lp = math.log(gamma) + log_v[t + 1] - log_v[t]
    for m2 in range(t):
        s = occ[m2]
        es = e[s]
        lp += _lbeta(es + a, sizes[s] - es + b) - lbeta_ab
    logw[t] = lp


@njit(cache=True, nogil=True)
def _sample_categorical_log(logw, m, rng):
    """Draw an index from unnormalized log weights logw[:m] (inverse CDF
    after a max shift); logw is clobbered."""
    mx = logw[0]
    for j in range(1, m):
        if logw[j] > mx:
            mx = logw[j]
    tot = 0.0
    for j in range(m):
        logw[j] = math.exp(logw[j] - mx)
        tot += logw[j]
    u = rng.random() * tot
    acc = 0.0
    for j in range(m):
        acc += logw[j]
        if u < acc:
            return j
    return m - 1


@njit(cache=True, nogil=True)
def _attach(z, sizes, t, pairs, edges, i, e, c_pick):
    for s in range(t):
        if s == c_pick:
            continue
        pairs[c_pick, s] += sizes[s]
        pairs[s, c_pick] = pairs[c_pick, s]
        edges[c_pick, s] += e[s]
        edges[s, c_pick] = edges[c_pick, s]
    pairs[c_pick, c_pick] += sizes[c_pick]
    edges[c_pick, c_pick] += e[c_pick]
    sizes[c_pick] += 1
    z[i] = c_pick


@njit(cache=True, nogil=True)
def _update_z_one(A, z, sizes, t, Q, logQ, log1mQ, pairs, edges, log_v,
                  gamma, a, b, lbeta_ab, crp, alpha, rng, i, n, e, occ, logw):
    t = _detach(A, z, sizes, t, Q, logQ, log1mQ, pairs, edges, i, n, e)
    _assignment_logw(z, sizes, t, logQ, log1mQ, e, log_v, gamma, a, b,
                     lbeta_ab, crp, alpha, n, i, occ, logw)
    pick = _sample_categorical_log(logw, t + 1, rng)
    if pick == t:
        c_new = t
        # new row drawn from its conditional Beta posterior given node i's
        # edges, so within-sweep likelihoods stay coherent
        for m in range(t):
            s = occ[m]
            q = rng.beta(e[s] + a, sizes[s] - e[s] + b)
            _set_q(Q, logQ, log1mQ, c_new, s, q)
        _set_q(Q, logQ, log1mQ, c_new, c_new, rng.beta(a, b))
        for s in range(t + 1):
            pairs[c_new, s] = 0
            pairs[s, c_new] = 0
            edges[c_new, s] = 0
            edges[s, c_new] = 0
        e[c_new] = 0
        sizes[c_new] = 0
        t += 1
        c_pick = c_new
    else:
        c_pick = occ[pick]
    _attach(z, sizes, t, pairs, edges, i, e, c_pick)
    return t


@njit(cache=True, nogil=True)
def _update_q(z, sizes, t, Q, logQ, log1mQ, pairs, edges, a, b, rng, n, occ):
    """Conjugate block refresh: Q_rs ~ Beta(edges + a, pairs - edges + b)."""
    _occ_order(z, n, t, -1, occ)
    for mi in range(t):
        r = occ[mi]
        for mj in range(mi, t):
            s = occ[mj]
            q = rng.beta(edges[r, s] + a, pairs[r, s] - edges[r, s] + b)
            _set_q(Q, logQ, log1mQ, r, s, q)


@njit(cache=True, nogil=True)
def _loglik_from_tallies(t, logQ, log1mQ, pairs, edges):
    acc = 0.0
    for r in range(t):
        for s in range(r, t):
            acc += edges[r, s] * logQ[r, s] \
                + (pairs[r, s] - edges[r, s]) * log1mQ[r, s]
    return acc


@njit(cache=True, nogil=True)
def _run_chain(A, z, sizes, t, Q, logQ, log1mQ, pairs, edges, log_v,
               gamma, a, b, crp, alpha, rng, iterations, burn_in,
               randomize, zs_out, ts_out, ll_out):
    """Full chain: (Q refresh; z sweep) x iterations, recording after burn-in.
    Returns the final t."""
    n = z.size
    e = np.zeros(n, np.int64)
    occ = np.zeros(n, np.int64)
    logw = np.zeros(n + 1, np.float64)
    order = np.arange(n)
    lbeta_ab = _lbeta(a, b)
    kept = 0
    for it in range(iterations):
        _update_q(z, sizes, t, Q, logQ, log1mQ, pairs, edges, a, b, rng, n, occ)
        if randomize:
            for j in range(n - 1, 0, -1):
                k = int(rng.random() * (j + 1))
                if k > j:
                    k = j
                tmp = order[j]
                order[j] = order[k]
                order[k] = tmp
        for idx in range(n):
            t = _update_z_one(A, z, sizes, t, Q, logQ, log1mQ, pairs, edges,
                              log_v, gamma, a, b, lbeta_ab, crp, alpha, rng,
                              order[idx], n, e, occ, logw)
        if it >= burn_in:
            for j in range(n):
                zs_out[kept, j] = z[j]
            ts_out[kept] = t
            ll_out[kept] = _loglik_from_tallies(t, logQ, log1mQ, pairs, edges)
            kept += 1
    return t


@njit(cache=True, nogil=True)
def canonicalize_batch(zs):
    """Relabel each row by first occurrence (restricted growth strings)."""
    m, n = zs.shape
    out = np.empty_like(zs)
    mapping = np.empty(n, zs.dtype)
    for r in range(m):
        for j in range(n):
            mapping[j] = -1
        nxt = 0
        for j in range(n):
            c = zs[r, j]
            if mapping[c] < 0:
                mapping[c] = nxt
                nxt += 1
            out[r, j] = mapping[c]
    return out
