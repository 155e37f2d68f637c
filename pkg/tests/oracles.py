"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the library's computation paths: high-precision
mpmath series for the urn coefficients, adaptive quadrature for Beta
marginals, O(n^2) pair scans and K!-enumeration for the metrics, and a
literal sequential urn for partition probabilities.
"""

import itertools
import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad
from scipy.stats import beta as beta_dist


def mp_log_v_truncated_poisson(n, t, gamma, rate=1.0, k_max=10_000, dps=50):
    """Direct high-precision summation of the coefficient series."""
    with mp.workdps(dps):
        tot = mp.mpf(0)
        norm = 1 - mp.e ** (-mp.mpf(rate))
        for k in range(t, k_max + 1):
            p_k = mp.e ** (-mp.mpf(rate)) * mp.mpf(rate) ** k / mp.factorial(k) / norm
            tot += mp.ff(k, t) / mp.rf(mp.mpf(gamma) * k, n) * p_k
        return float(mp.log(tot))


def quad_log_marginal(n_up, a_up, n_down, a_down):
    """U(0,1)-prior double integral of the homogeneous likelihood; the
    integrand factorizes so each factor gets its own adaptive quadrature."""
    f_p = quad(lambda p: p ** a_up * (1 - p) ** (n_up - a_up),
               0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    f_q = quad(lambda q: q ** a_down * (1 - q) ** (n_down - a_down),
               0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return math.log(f_p) + math.log(f_q)


def quad_log_m_new(e_counts, m_counts, a, b):
    """Numerical integral of prod_t Q^e (1-Q)^(m-e) over iid Beta(a,b) Q's."""
    total = 0.0
    for e_t, m_t in zip(e_counts, m_counts):
        val = quad(lambda x: x ** e_t * (1 - x) ** (m_t - e_t) * beta_dist.pdf(x, a, b),
                   0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)[0]
        total += math.log(val)
    return total


def brute_rand_index(z1, z2):
    """Direct four-category pair classification."""
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    n = z1.size
    a = b = c = d = 0
    for i in range(n):
        for j in range(i + 1, n):
            s1 = z1[i] == z1[j]
            s2 = z2[i] == z2[j]
            if s1 and s2:
                a += 1
            elif not s1 and not s2:
                b += 1
            elif s1:
                c += 1
            else:
                d += 1
    return (a + b) / (a + b + c + d)


def brute_perm_hamming(z1, z2, k):
    """Minimum Hamming distance over all k! label permutations."""
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    best = z1.size
    for perm in itertools.permutations(range(k)):
        lut = np.asarray(perm)
        best = min(best, int((lut[z1] != z2).sum()))
    return best


def sequential_urn_log_prob(labels_in_order, tables=None, crp_alpha=None):
    """Probability of a partition built one element at a time.

    `labels_in_order` gives each element's block in insertion order; blocks
    are matched by label value.  For the MFM urn pass `tables`, a dict
    mapping sample size m to the coefficient table for m; for the CRP pass
    `crp_alpha`.
    """
    lp = 0.0
    block_of: dict = {}
    sizes: list[int] = []
    for step, lab in enumerate(labels_in_order):
        if step == 0:
            block_of[lab] = 0
            sizes.append(1)
            continue
        if crp_alpha is not None:
            existing = np.asarray(sizes, dtype=float)
            new_w = crp_alpha
        else:
            table = tables[step + 1]
            existing = np.asarray(sizes, dtype=float) + table.gamma
            new_w = table.gamma * math.exp(table.log_new_cluster_ratio(len(sizes)))
        tot = existing.sum() + new_w
        if lab in block_of:
            idx = block_of[lab]
            lp += math.log(existing[idx] / tot)
            sizes[idx] += 1
        else:
            lp += math.log(new_w / tot)
            block_of[lab] = len(sizes)
            sizes.append(1)
    return lp


def brute_log_likelihood(A, z, Q):
    """Per-edge product of Bernoulli pmfs, skipping no factorization."""
    n = A.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            theta = Q[z[i], z[j]]
            pr = theta if A[i, j] else 1.0 - theta
            if pr == 0.0:
                return float("-inf")
            total += math.log(pr)
    return total
