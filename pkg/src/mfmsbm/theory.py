"""Executable homogeneous-SBM quantities: exact marginal likelihood, its
binary-entropy approximation, the signal-strength divergence, the four-way
pair decomposition against a reference labeling, and the combinatorial
functionals controlling marginal-likelihood gaps, plus a desk-scale gap
experiment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .graphs import (AdjacencyMatrix, EdgeProbMatrix, Labeling, balanced_sizes,
                     generate_sbm, labeling_from_sizes)

__all__ = [
    "HomogeneousCounts",
    "PairDecomposition",
    "homogeneous_counts",
    "log_marginal_homogeneous",
    "binary_entropy",
    "entropy_approx",
    "divergence_bar_d",
    "pair_decomposition",
    "combinatorial_functionals",
    "marglik_gap_experiment",
    "k_mass_probe",
]

UP, DOWN = 0, 1  # within-pair / between-pair spin indices


@dataclass(frozen=True)
class HomogeneousCounts:
    """Within/between pair counts and edge counts for a labeling."""

    n_up: int
    a_up: int
    n_down: int
    a_down: int

    def __post_init__(self):
        if not (0 <= self.a_up <= self.n_up and 0 <= self.a_down <= self.n_down):
            raise ValueError("edge counts exceed pair counts")


def _same_mask(z: np.ndarray, iu, ju) -> np.ndarray:
    return z[iu] == z[ju]


def homogeneous_counts(A: AdjacencyMatrix, z) -> HomogeneousCounts:
    """Tally pairs and edges within (z_i = z_j) and between communities."""
    zz = z.z if isinstance(z, Labeling) else np.asarray(z)
    if zz.size != A.n:
        raise ValueError("labeling length %d != n=%d" % (zz.size, A.n))
    iu, ju = np.triu_indices(A.n, k=1)
    same = _same_mask(zz, iu, ju)
    a = A.matrix[iu, ju].astype(bool)
    n_up = int(same.sum())
    return HomogeneousCounts(
        n_up=n_up,
        a_up=int((a & same).sum()),
        n_down=int(same.size - n_up),
        a_down=int((a & ~same).sum()),
    )


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def log_marginal_homogeneous(counts: HomogeneousCounts) -> float:
    """log of the U(0,1)-prior marginal likelihood:
    [(n_up+1) C(n_up, a_up)]^-1 [(n_down+1) C(n_down, a_down)]^-1."""
    return float(-math.log(counts.n_up + 1) - _log_binom(counts.n_up, counts.a_up)
                 - math.log(counts.n_down + 1) - _log_binom(counts.n_down, counts.a_down))


def binary_entropy(x) -> np.ndarray:
    """H(x) = x log x + (1-x) log(1-x), with H(0) = H(1) = 0 (limit)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    inner = (x > 0) & (x < 1)
    xi = x[inner]
    out[inner] = xi * np.log(xi) + (1 - xi) * np.log1p(-xi)
    return out


def entropy_approx(counts: HomogeneousCounts) -> float:
    """Entropy approximation of the log marginal likelihood; empty pair
    classes contribute zero."""
    total = 0.0
    if counts.n_up > 0:
        total += counts.n_up * float(binary_entropy(counts.a_up / counts.n_up))
    if counts.n_down > 0:
        total += counts.n_down * float(binary_entropy(counts.a_down / counts.n_down))
    return total


def divergence_bar_d(p0: float, q0: float) -> float:
    """(p0-q0)^2 / ((p0 v q0)(1 - (p0 ^ q0))); zero iff p0 = q0."""
    if not (0 < p0 < 1 and 0 < q0 < 1):
        raise ValueError("p0, q0 must lie in (0, 1)")
    hi, lo = max(p0, q0), min(p0, q0)
    return (p0 - q0) ** 2 / (hi * (1 - lo))


@dataclass(frozen=True)
class PairDecomposition:
    """2x2 split of the i<j pairs by (within/between in z, within/between in z0).

    `n_tab[d, d0]` counts pairs with spin d under z and d0 under z0
    (0 = within, 1 = between); `a_tab` counts the subset carrying an edge.
    Ratio tables use the convention 0/0 = 0.
    """

    n_tab: np.ndarray
    a_tab: np.ndarray

    def n_dag_z(self) -> np.ndarray:
        """(n_up(z), n_down(z)) — row marginals."""
        return self.n_tab.sum(axis=1)

    def n_dag_z0(self) -> np.ndarray:
        """(n_up(z0), n_down(z0)) — column marginals."""
        return self.n_tab.sum(axis=0)

    def a_dag_z(self) -> np.ndarray:
        return self.a_tab.sum(axis=1)

    def a_dag_z0(self) -> np.ndarray:
        return self.a_tab.sum(axis=0)

    def omega(self) -> np.ndarray:
        """omega[d, d0] = n_tab[d, d0] / n_dag_z[d]; rows sum to 1."""
        return _safe_div(self.n_tab, self.n_dag_z()[:, None])

    def omega_tilde(self) -> np.ndarray:
        """omega_tilde[d, d0] = n_tab[d, d0] / n_dag_z0[d0]; columns sum to 1."""
        return _safe_div(self.n_tab, self.n_dag_z0()[None, :])

    def w_tab(self) -> np.ndarray:
        """Edge fraction per cell: a_tab / n_tab."""
        return _safe_div(self.a_tab, self.n_tab)

    def x_dag(self) -> np.ndarray:
        """Edge fraction per z spin; equals sum_d0 omega * W row-wise."""
        return _safe_div(self.a_dag_z(), self.n_dag_z())

    def y_dag(self) -> np.ndarray:
        """Edge fraction per z0 spin; equals sum_d omega_tilde * W column-wise."""
        return _safe_div(self.a_dag_z0(), self.n_dag_z0())

    def l_dag(self) -> np.ndarray:
        """Derived residual sum_d0 omega[d, d0] (Y_d0 - W[d, d0]) per z spin."""
        return (self.omega() * (self.y_dag()[None, :] - self.w_tab())).sum(axis=1)


def _safe_div(num, den):
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.zeros(np.broadcast_shapes(num.shape, den.shape))
    np.divide(num, den, out=out, where=den != 0)
    return out


def pair_decomposition(A: AdjacencyMatrix, z, z0) -> PairDecomposition:
    za = z.z if isinstance(z, Labeling) else np.asarray(z)
    zb = z0.z if isinstance(z0, Labeling) else np.asarray(z0)
    if za.size != zb.size or za.size != A.n:
        raise ValueError("labelings must both have length n=%d" % A.n)
    iu, ju = np.triu_indices(A.n, k=1)
    same_z = _same_mask(za, iu, ju)
    same_z0 = _same_mask(zb, iu, ju)
    a = A.matrix[iu, ju].astype(bool)
    n_tab = np.zeros((2, 2), dtype=np.int64)
    a_tab = np.zeros((2, 2), dtype=np.int64)
    for d, mz in ((UP, same_z), (DOWN, ~same_z)):
        for d0, mz0 in ((UP, same_z0), (DOWN, ~same_z0)):
            cell = mz & mz0
            n_tab[d, d0] = cell.sum()
            a_tab[d, d0] = (cell & a).sum()
    return PairDecomposition(n_tab=n_tab, a_tab=a_tab)


def combinatorial_functionals(z, z0) -> dict[str, float]:
    """The two pair-count functionals controlling gap bounds.

    n_bold = n_uu n_du / n_up(z0) + n_ud n_dd / n_down(z0)
    n_tilde = n_uu n_ud / n_up(z) + n_du n_dd / n_down(z)
    with zero-denominator terms contributing 0.
    """
    za = z.z if isinstance(z, Labeling) else np.asarray(z)
    zb = z0.z if isinstance(z0, Labeling) else np.asarray(z0)
    if za.size != zb.size:
        raise ValueError("labelings must have equal length")
    iu, ju = np.triu_indices(za.size, k=1)
    same_z = _same_mask(za, iu, ju)
    same_z0 = _same_mask(zb, iu, ju)
    n = np.zeros((2, 2))
    n[UP, UP] = (same_z & same_z0).sum()
    n[UP, DOWN] = (same_z & ~same_z0).sum()
    n[DOWN, UP] = (~same_z & same_z0).sum()
    n[DOWN, DOWN] = (~same_z & ~same_z0).sum()
    nz = n.sum(axis=1)
    nz0 = n.sum(axis=0)
    n_bold = float(_safe_div(n[UP, UP] * n[DOWN, UP], nz0[UP])
                   + _safe_div(n[UP, DOWN] * n[DOWN, DOWN], nz0[DOWN]))
    n_tilde = float(_safe_div(n[UP, UP] * n[UP, DOWN], nz[UP])
                    + _safe_div(n[DOWN, UP] * n[DOWN, DOWN], nz[DOWN]))
    return {"n_bold": n_bold, "n_tilde": n_tilde}


def _all_labelings(n: int, k: int) -> np.ndarray:
    if k ** n > 300_000:
        raise ValueError("exhaustive sweep over %d^%d labelings refused" % (k, n))
    return np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)


def _perm_hamming_batch(Z: np.ndarray, z0: np.ndarray, k: int) -> np.ndarray:
    """d(z, z0) for every row of Z, by exhausting the k! label permutations."""
    n = Z.shape[1]
    best = np.full(Z.shape[0], n, dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        lut = np.asarray(perm)
        ham = (lut[Z] != z0[None, :]).sum(axis=1)
        np.minimum(best, ham, out=best)
    return best


def _entropy_terms(n_vec: np.ndarray, a_vec: np.ndarray) -> np.ndarray:
    """n * H(a/n) elementwise with empty classes contributing 0."""
    frac = _safe_div(a_vec, n_vec)
    return n_vec * binary_entropy(frac)


def marglik_gap_experiment(n: int, k: int, p0: float, q0: float,
                           n_graphs: int = 50, seed: int = 0,
                           exhaustive: bool = True,
                           n_z_samples: int = 2000) -> dict:
    """Generate homogeneous-SBM graphs from a balanced truth and report the
    entropy-approximation gaps ltilde(z0) - ltilde(z) over alternative
    labelings.  Diagnostic only; no pass/fail semantics."""
    d_bar = divergence_bar_d(p0, q0) if p0 != q0 else 0.0
    if exhaustive:
        if n > 14:
            raise ValueError("exhaustive mode refused for n=%d > 14" % n)
        Z = _all_labelings(n, k)
    z0 = labeling_from_sizes(balanced_sizes(n, k)).z
    rng = np.random.default_rng(seed)
    if not exhaustive:
        Z = rng.integers(0, k, size=(n_z_samples, n))
    r = _perm_hamming_batch(Z, z0, k)
    iu, ju = np.triu_indices(n, k=1)
    same = (Z[:, iu] == Z[:, ju])
    same0 = z0[iu] == z0[ju]
    n_up = same.sum(axis=1).astype(np.float64)
    n_down = same.shape[1] - n_up
    q_mat = EdgeProbMatrix.homogeneous(k, p0, q0)
    truth = Labeling(z0)
    keep = r >= 1
    total_pairs = 0
    violations = 0
    min_gap_by_r: dict[int, float] = {}
    min_gap_over_r = math.inf
    for g in range(n_graphs):
        A = generate_sbm(truth, q_mat, seed=rng)
        a_vec = A.matrix[iu, ju].astype(np.float64)
        a_up = same @ a_vec
        a_down = a_vec.sum() - a_up
        lt = _entropy_terms(n_up, a_up) + _entropy_terms(n_down, a_down)
        lt0 = float(_entropy_terms(np.array([same0.sum()]), np.array([(a_vec * same0).sum()]))
                    + _entropy_terms(np.array([(~same0).sum()]), np.array([(a_vec * ~same0).sum()])))
        gap = lt0 - lt
        total_pairs += int(keep.sum())
        violations += int((gap[keep] < 0).sum())
        for rv in np.unique(r[keep]):
            sel = keep & (r == rv)
            mg = float(gap[sel].min())
            key = int(rv)
            min_gap_by_r[key] = min(min_gap_by_r.get(key, math.inf), mg)
            min_gap_over_r = min(min_gap_over_r, mg / float(rv))
    return {
        "n": n,
        "k": k,
        "p0": p0,
        "q0": q0,
        "n_graphs": n_graphs,
        "seed": seed,
        "mode": "exhaustive" if exhaustive else "sampled",
        "d_bar": d_bar,
        "d_bar_n_over_k": d_bar * n / k,
        "total_pairs": total_pairs,
        "violations": violations,
        "violation_fraction": violations / total_pairs if total_pairs else 0.0,
        "min_gap_by_r": {str(rv): float(mg) for rv, mg in sorted(min_gap_by_r.items())},
        "min_gap_over_r": float(min_gap_over_r) if total_pairs else None,
    }


def write_gap_report(report: dict, out_dir) -> None:
    """JSON report plus a (r, min_gap) CSV and a figure for plotting."""
    import json
    import os

    from . import plots

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "gap_report.json"), "w") as fh:
        json.dump(report, fh, indent=2)
    rows = sorted((int(rv), mg) for rv, mg in report["min_gap_by_r"].items())
    with open(os.path.join(out_dir, "gap_by_r.csv"), "w") as fh:
        fh.write("r,min_gap\n")
        for rv, mg in rows:
            fh.write("%d,%.10g\n" % (rv, mg))
    plots.gap_figure(report, os.path.join(out_dir, "gap_by_r.png"))


def k_mass_probe(n: int, k: int, p: float, q: float, n_fits: int = 10,
                 master_seed: int = 0, iterations: int = 1000,
                 burn_in: int = 200, init_clusters: int = 9) -> list[float]:
    """Posterior mass on t = k across seeded fits on fresh graphs; probes the
    concentration of the number of occupied components at moderate n."""
    from .gibbs import SamplerConfig, run_chain
    from .prior import compute_log_v

    table = compute_log_v(n)
    truth = labeling_from_sizes(balanced_sizes(n, k))
    q_mat = EdgeProbMatrix.homogeneous(k, p, q)
    masses = []
    for f in range(n_fits):
        A = generate_sbm(truth, q_mat, seed=master_seed * 1_000_000 + f)
        cfg = SamplerConfig(iterations=iterations, burn_in=burn_in,
                            init_clusters=init_clusters,
                            seed=master_seed * 1_000_000 + 500_000 + f)
        sample = run_chain(A, cfg, table)
        masses.append(float((sample.ts == k).mean()))
    return masses
