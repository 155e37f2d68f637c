"""Figure rendering for report outputs.  All functions write a file and
return its path; rendering uses the Agg backend so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "convergence_figure",
    "cocluster_heatmap",
    "t_histogram_figure",
    "replicate_histogram_figure",
    "oracle_comparison_figure",
    "gap_figure",
]


def convergence_figure(traces, path, title=None):
    """Rand index vs. iteration, one line per starting configuration."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ri in traces:
        ax.plot(np.arange(1, len(ri) + 1), ri, lw=1.2, label=str(label))
    ax.set_xlabel("MCMC iteration")
    ax.set_ylabel("Rand index vs. truth")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(title="start", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def cocluster_heatmap(pihat, path, order=None, title=None):
    """Posterior co-clustering matrix; nodes optionally reordered so the
    block structure is visible (pass the point-estimate labeling order)."""
    m = np.asarray(pihat)
    if order is not None:
        idx = np.asarray(order)
        m = m[np.ix_(idx, idx)]
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(m, cmap="viridis", vmin=0, vmax=1, interpolation="nearest")
    fig.colorbar(im, ax=ax, shrink=0.85, label="P(z_i = z_j | data)")
    ax.set_xlabel("node")
    ax.set_ylabel("node")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def t_histogram_figure(hist, path, title=None):
    """Posterior distribution of the number of occupied communities."""
    ks = sorted(hist)
    counts = np.array([hist[k] for k in ks], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(ks, counts / counts.sum(), color="steelblue")
    ax.set_xlabel("number of communities |z|")
    ax.set_ylabel("posterior frequency")
    ax.set_xticks(ks)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def replicate_histogram_figure(recovered, true_k, path, title=None):
    """Histogram of the estimated number of communities across replicates."""
    vals, counts = np.unique(np.asarray(recovered), return_counts=True)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    colors = ["firebrick" if v == true_k else "grey" for v in vals]
    ax.bar(vals, counts, color=colors)
    ax.set_xlabel("estimated number of communities")
    ax.set_ylabel("replicates")
    ax.set_xticks(vals)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def oracle_comparison_figure(exact, empirical, path, top: int = 20):
    """Exact vs. sampled probability for the highest-probability partitions."""
    keys = sorted(exact, key=lambda k: -exact[k])[:top]
    x = np.arange(len(keys))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x - 0.2, [exact[k] for k in keys], width=0.4, label="exact")
    ax.bar(x + 0.2, [empirical.get(k, 0.0) for k in keys], width=0.4, label="sampler")
    ax.set_xticks(x)
    ax.set_xticklabels(["".join(map(str, k)) for k in keys], rotation=90, fontsize=7)
    ax.set_xlabel("partition (restricted growth string)")
    ax.set_ylabel("probability")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def gap_figure(report, path):
    """Minimum entropy-approximation gap per distance r, with the
    divergence-rate reference line."""
    rows = sorted((int(r), g) for r, g in report["min_gap_by_r"].items())
    if not rows:
        return path
    rs = np.array([r for r, _ in rows])
    gaps = np.array([g for _, g in rows])
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(rs, gaps, "o-", label="min gap")
    ax.plot(rs, report["d_bar_n_over_k"] * rs, "--", color="grey",
            label="D-bar n r / K")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("permutation-invariant Hamming distance r")
    ax.set_ylabel("min over z of  l~(z0) - l~(z)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
