"""Graph types, block-model generators and likelihood evaluation.

Undirected binary networks without self-loops.  Community labels are
0-based and contiguous everywhere inside the package; file formats use
1-based labels (see :mod:`mfmsbm.io`).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "AdjacencyMatrix",
    "Labeling",
    "EdgeProbMatrix",
    "DegreeWeights",
    "BlockCounts",
    "generate_sbm",
    "generate_dcsbm",
    "log_likelihood",
    "block_counts",
    "balanced_sizes",
    "ratio_sizes",
    "labeling_from_sizes",
]


class AdjacencyMatrix:
    """Symmetric binary adjacency matrix with zero diagonal, n >= 2."""

    __slots__ = ("_a",)

    def __init__(self, matrix):
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square, got shape %s" % (a.shape,))
        if a.shape[0] < 2:
            raise ValueError("need at least 2 nodes, got %d" % a.shape[0])
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        a = a.astype(np.uint8)
        if (a != a.T).any():
            raise ValueError("adjacency matrix must be symmetric")
        if np.diag(a).any():
            raise ValueError("self-loops are not allowed (nonzero diagonal)")
        a.setflags(write=False)
        self._a = a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only dense n x n uint8 view."""
        return self._a

    @property
    def edge_count(self) -> int:
        return int(self._a.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edge list as 0-based (i, j) pairs with i < j."""
        iu, ju = np.nonzero(np.triu(self._a, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    @classmethod
    def from_edges(cls, n: int, edges) -> "AdjacencyMatrix":
        """Build from 0-based (i, j) pairs; rejects duplicates and self-loops."""
        a = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            if i == j:
                raise ValueError("self-loop (%d, %d)" % (i, j))
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("edge (%d, %d) out of range for n=%d" % (i, j, n))
            if a[i, j]:
                raise ValueError("duplicate edge (%d, %d)" % (i, j))
            a[i, j] = a[j, i] = 1
        return cls(a)

    def __eq__(self, other):
        return isinstance(other, AdjacencyMatrix) and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        return "AdjacencyMatrix(n=%d, edges=%d)" % (self.n, self.edge_count)


class Labeling:
    """Community assignment with contiguous 0-based labels 0..t-1."""

    __slots__ = ("_z", "_t")

    def __init__(self, assignments):
        z = np.asarray(assignments, dtype=np.int64)
        if z.ndim != 1 or z.size == 0:
            raise ValueError("labeling must be a nonempty 1-d sequence")
        t = int(z.max()) + 1
        if z.min() < 0:
            raise ValueError("labels must be nonnegative")
        if not np.all(np.isin(np.arange(t), z)):
            raise ValueError("labels must be contiguous 0..t-1 (every label occupied)")
        z = z.copy()
        z.setflags(write=False)
        self._z = z
        self._t = t

    @property
    def z(self) -> np.ndarray:
        return self._z

    @property
    def n(self) -> int:
        return self._z.size

    @property
    def t(self) -> int:
        """Number of occupied communities."""
        return self._t

    def sizes(self) -> np.ndarray:
        return np.bincount(self._z, minlength=self._t)

    @classmethod
    def from_one_based(cls, assignments) -> "Labeling":
        z = np.asarray(assignments, dtype=np.int64)
        if z.size and z.min() < 1:
            raise ValueError("1-based labels must be >= 1")
        return cls(z - 1)

    def to_one_based(self) -> np.ndarray:
        return self._z + 1

    def __eq__(self, other):
        return isinstance(other, Labeling) and np.array_equal(self._z, other._z)

    def __hash__(self):
        return hash(self._z.tobytes())

    def __repr__(self):
        return "Labeling(n=%d, t=%d)" % (self.n, self._t)


class EdgeProbMatrix:
    """Symmetric k x k matrix of block edge probabilities in [0, 1]."""

    __slots__ = ("_q",)

    def __init__(self, probs):
        q = np.asarray(probs, dtype=np.float64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("edge probability matrix must be square")
        if q.shape[0] < 1:
            raise ValueError("need at least one block")
        if not np.allclose(q, q.T, rtol=0, atol=0):
            raise ValueError("edge probability matrix must be symmetric")
        if (q < 0).any() or (q > 1).any():
            raise ValueError("edge probabilities must lie in [0, 1]")
        q = q.copy()
        q.setflags(write=False)
        self._q = q

    @property
    def k(self) -> int:
        return self._q.shape[0]

    @property
    def q(self) -> np.ndarray:
        return self._q

    @classmethod
    def homogeneous(cls, k: int, p: float, q: float) -> "EdgeProbMatrix":
        """Compound-symmetric matrix: p on the diagonal, q off-diagonal."""
        m = np.full((k, k), q, dtype=np.float64)
        np.fill_diagonal(m, p)
        return cls(m)

    def __repr__(self):
        return "EdgeProbMatrix(k=%d)" % self.k


class DegreeWeights:
    """Per-node degree-correction weights w_i in (0, 1]."""

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-d sequence")
        if (w <= 0).any() or (w > 1).any():
            raise ValueError("weights must lie in (0, 1]")
        w = w.copy()
        w.setflags(write=False)
        self._w = w

    @property
    def w(self) -> np.ndarray:
        return self._w

    @property
    def n(self) -> int:
        return self._w.size

    @classmethod
    def misspecified(cls, n: int, fraction: float = 0.3, weight: float = 0.8,
                     seed=None) -> "DegreeWeights":
        """Randomly set a fraction of the weights to `weight`, the rest to 1."""
        rng = np.random.default_rng(seed)
        w = np.ones(n)
        k = int(round(fraction * n))
        idx = rng.choice(n, size=k, replace=False)
        w[idx] = weight
        return cls(w)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _upper_indices(n: int):
    return np.triu_indices(n, k=1)


def generate_sbm(z: Labeling, Q: EdgeProbMatrix, seed=None) -> AdjacencyMatrix:
    """Draw a network with independent Bernoulli(Q[z_i, z_j]) edges, i < j.

    `seed` may be an int or a Generator; the upper triangle is drawn in
    row-major (i < j) order so results are reproducible across platforms.
    """
    if z.t > Q.k:
        raise ValueError("labeling uses %d blocks but Q has only %d" % (z.t, Q.k))
    rng = _as_rng(seed)
    n = z.n
    iu, ju = _upper_indices(n)
    theta = Q.q[z.z[iu], z.z[ju]]
    u = rng.random(theta.size)
    a = np.zeros((n, n), dtype=np.uint8)
    a[iu, ju] = u < theta
    a |= a.T
    return AdjacencyMatrix(a)


def generate_dcsbm(z: Labeling, Q: EdgeProbMatrix, w: DegreeWeights,
                   seed=None) -> AdjacencyMatrix:
    """Degree-corrected draw: edge probability w_i * w_j * Q[z_i, z_j]."""
    if z.t > Q.k:
        raise ValueError("labeling uses %d blocks but Q has only %d" % (z.t, Q.k))
    if w.n != z.n:
        raise ValueError("weights length %d != n=%d" % (w.n, z.n))
    rng = _as_rng(seed)
    n = z.n
    iu, ju = _upper_indices(n)
    theta = w.w[iu] * w.w[ju] * Q.q[z.z[iu], z.z[ju]]
    if (theta < 0).any() or (theta > 1).any():
        raise ValueError("edge probabilities w_i*w_j*Q fall outside [0, 1]")
    u = rng.random(theta.size)
    a = np.zeros((n, n), dtype=np.uint8)
    a[iu, ju] = u < theta
    a |= a.T
    return AdjacencyMatrix(a)


def log_likelihood(A: AdjacencyMatrix, z: Labeling, Q: EdgeProbMatrix) -> float:
    """Bernoulli log-likelihood of the observed edges given (z, Q).

    Returns -inf (not an error) when a block probability of exactly 0 or 1
    contradicts the data.
    """
    if z.n != A.n:
        raise ValueError("labeling length %d != n=%d" % (z.n, A.n))
    if z.t > Q.k:
        raise ValueError("labeling uses %d blocks but Q has only %d" % (z.t, Q.k))
    iu, ju = _upper_indices(A.n)
    theta = Q.q[z.z[iu], z.z[ju]]
    a = A.matrix[iu, ju]
    with np.errstate(divide="ignore"):
        terms = np.where(a == 1, np.log(theta), np.log1p(-theta))
    if np.isneginf(terms).any():
        return float("-inf")
    return float(terms.sum())


class BlockCounts:
    """Unordered block-pair tallies: potential pairs and realized edges.

    `pairs[r, s]` counts node pairs {i, j}, i < j, with labels {r, s}
    (so the diagonal holds C(n_r, 2)); `edges` counts those pairs with an
    edge present.  Both matrices are symmetric.
    """

    __slots__ = ("pairs", "edges", "t")

    def __init__(self, pairs: np.ndarray, edges: np.ndarray):
        self.pairs = pairs
        self.edges = edges
        self.t = pairs.shape[0]

    def items(self):
        """Yield ((r, s), (n_rs, edge_rs)) for r <= s."""
        for r in range(self.t):
            for s in range(r, self.t):
                yield (r, s), (int(self.pairs[r, s]), int(self.edges[r, s]))

    def total_pairs(self) -> int:
        return int(np.triu(self.pairs).sum())

    def total_edges(self) -> int:
        return int(np.triu(self.edges).sum())


def block_counts(A: AdjacencyMatrix, z: Labeling) -> BlockCounts:
    """Tally potential and realized edges per unordered block pair."""
    if z.n != A.n:
        raise ValueError("labeling length %d != n=%d" % (z.n, A.n))
    t = z.t
    sizes = z.sizes()
    pairs = np.outer(sizes, sizes)
    np.fill_diagonal(pairs, sizes * (sizes - 1) // 2)
    onehot = np.zeros((t, A.n))
    onehot[z.z, np.arange(A.n)] = 1.0
    # ordered[r, s] counts directed edges r->s; within-block entries double-count
    ordered = onehot @ A.matrix @ onehot.T
    edges = np.where(np.eye(t, dtype=bool), np.diag(ordered) / 2, ordered)
    return BlockCounts(pairs.astype(np.int64), np.rint(edges).astype(np.int64))


def balanced_sizes(n: int, k: int) -> list[int]:
    """floor(n/k) nodes in every community but the last, remainder to the last."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    base = n // k
    return [base] * (k - 1) + [n - base * (k - 1)]


def ratio_sizes(n: int, ratios) -> list[int]:
    """Sizes proportional to `ratios`, floored, remainder to the last community."""
    r = np.asarray(ratios, dtype=np.float64)
    if (r <= 0).any():
        raise ValueError("ratios must be positive")
    sizes = [int(n * ri / r.sum()) for ri in r[:-1]]
    sizes.append(n - sum(sizes))
    if min(sizes) < 1:
        raise ValueError("ratio sizes leave an empty community for n=%d" % n)
    return sizes


def labeling_from_sizes(sizes) -> Labeling:
    """Block labeling (0,..,0,1,..,1,...) with the given community sizes."""
    return Labeling(np.repeat(np.arange(len(sizes)), sizes))
