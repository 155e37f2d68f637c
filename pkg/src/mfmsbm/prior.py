"""Partition-prior machinery for the mixture-of-finite-mixtures urn.

The central object is the coefficient table V_n(t) = sum_k k_(t) / (gk)^(n) p(k),
where k_(t) is a falling factorial, (gk)^(n) a rising factorial and p a pmf on
the number of components.  Everything is computed in log space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .graphs import Labeling

__all__ = [
    "ComponentPmf",
    "MfmPriorTable",
    "SetPartition",
    "compute_log_v",
    "urn_weights",
    "log_partition_prior",
    "crp_urn_weights",
    "crp_log_partition_prior",
    "enumerate_partitions",
    "enumerate_rgs",
    "bell_number",
    "save_table",
    "load_table",
]

_RELATIVE_FLOOR = math.log(1e-16)
_PATIENCE = 50


class ComponentPmf:
    """Proper pmf on {1, 2, ...} for the number of mixture components."""

    def __init__(self, log_pmf, descriptor: str, check: bool = True):
        self._log_pmf = log_pmf
        self.descriptor = descriptor
        if check:
            self._check_normalized()

    def log_pmf(self, k):
        """log p(k) for integer k >= 1 (scalar or array)."""
        return self._log_pmf(np.asarray(k))

    def _check_normalized(self, k_max: int = 10_000, tol: float = 1e-10):
        total = logsumexp(self.log_pmf(np.arange(1, k_max + 1)))
        if abs(math.expm1(total)) > tol:
            raise ValueError("pmf %r does not sum to 1 over 1..%d (mass %.3e)"
                             % (self.descriptor, k_max, math.exp(total)))

    @classmethod
    def truncated_poisson(cls, rate: float = 1.0) -> "ComponentPmf":
        """Poisson(rate) conditioned on k >= 1."""
        if rate <= 0:
            raise ValueError("rate must be positive")
        log_norm = math.log(-math.expm1(-rate))

        def lp(k):
            k = np.asarray(k, dtype=np.float64)
            out = -rate + k * math.log(rate) - gammaln(k + 1) - log_norm
            return np.where(k >= 1, out, -np.inf)

        return cls(lp, "truncated-poisson(rate=%g)" % rate)

    @classmethod
    def point_mass(cls, k0: int) -> "ComponentPmf":
        """Degenerate prior: exactly k0 components."""
        if k0 < 1:
            raise ValueError("k0 must be >= 1")

        def lp(k):
            k = np.asarray(k)
            return np.where(k == k0, 0.0, -np.inf)

        return cls(lp, "point-mass(k=%d)" % k0)

    @classmethod
    def from_descriptor(cls, descriptor: str) -> "ComponentPmf":
        if descriptor.startswith("truncated-poisson(rate="):
            rate = float(descriptor[len("truncated-poisson(rate="):-1])
            return cls.truncated_poisson(rate)
        if descriptor.startswith("point-mass(k="):
            k0 = int(descriptor[len("point-mass(k="):-1])
            return cls.point_mass(k0)
        raise ValueError("unknown pmf descriptor %r" % descriptor)


@dataclass(frozen=True)
class MfmPriorTable:
    """Precomputed log V_n(t) values for a fixed sample size n.

    `log_v[t]` holds log V_n(t) for t = 1..t_max; index 0 and indices above
    t_max are -inf.  Immutable and shared read-only across chains.
    """

    n: int
    gamma: float
    t_max: int
    log_v: np.ndarray = field(repr=False)
    pmf: ComponentPmf = field(repr=False)

    def __post_init__(self):
        self.log_v.setflags(write=False)
        bad = ~(np.isfinite(self.log_v) | np.isneginf(self.log_v))
        if bad.any():
            raise ValueError("log V table contains nan/inf entries")
        # new-cluster log-ratio must never be +inf: support nesting means
        # V_n(t) = 0 forces V_n(t+1) = 0
        for t in range(1, self.t_max):
            if np.isneginf(self.log_v[t]) and not np.isneginf(self.log_v[t + 1]):
                raise ValueError("V_n(%d) = 0 but V_n(%d) > 0" % (t, t + 1))

    def log_v_at(self, t: int) -> float:
        if not 1 <= t <= self.t_max:
            raise ValueError("t=%d outside table range 1..%d" % (t, self.t_max))
        return float(self.log_v[t])

    def log_new_cluster_ratio(self, t: int) -> float:
        """log[V_n(t+1) / V_n(t)] for a partition currently holding t blocks."""
        if not 1 <= t < self.t_max + 1:
            raise ValueError("t=%d outside table range" % t)
        if t + 1 > self.t_max:
            return -np.inf
        return float(self.log_v[t + 1] - self.log_v[t])


def _log_v_single(n: int, t: int, gamma: float, pmf: ComponentPmf,
                  hard_cap: int) -> float:
    """log V_n(t) by direct summation over k = t, t+1, ... with truncation."""
    acc = -np.inf
    stalled = 0
    for k in range(t, hard_cap + 1):
        term = (gammaln(k + 1) - gammaln(k - t + 1)
                - (gammaln(gamma * k + n) - gammaln(gamma * k))
                + float(pmf.log_pmf(k)))
        if np.isneginf(term):
            continue
        acc = np.logaddexp(acc, term)
        if term < acc + _RELATIVE_FLOOR:
            stalled += 1
            if stalled >= _PATIENCE:
                break
        else:
            stalled = 0
    return float(acc)


def compute_log_v(n: int, t_max: int | None = None, gamma: float = 1.0,
                  pmf: ComponentPmf | None = None) -> MfmPriorTable:
    """Build the log V_n(t) table for t = 1..t_max (default t_max = n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if t_max is None:
        t_max = n
    if not 1 <= t_max <= n:
        raise ValueError("need 1 <= t_max <= n")
    if pmf is None:
        pmf = ComponentPmf.truncated_poisson(1.0)
    hard_cap = max(500, n + 100)
    log_v = np.full(n + 2, -np.inf)
    for t in range(1, t_max + 1):
        log_v[t] = _log_v_single(n, t, gamma, pmf, hard_cap)
    return MfmPriorTable(n=n, gamma=gamma, t_max=t_max, log_v=log_v, pmf=pmf)


class SetPartition:
    """Partition of {0..n-1} into nonempty disjoint blocks."""

    __slots__ = ("blocks", "n")

    def __init__(self, blocks):
        norm = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        elems = [e for b in norm for e in b]
        if not norm or any(len(b) == 0 for b in norm):
            raise ValueError("blocks must be nonempty")
        if sorted(elems) != list(range(len(elems))):
            raise ValueError("blocks must partition {0..n-1}")
        self.blocks = norm
        self.n = len(elems)

    @property
    def t(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def rgs(self) -> tuple[int, ...]:
        """Restricted growth string: first-occurrence block index per element."""
        z = [0] * self.n
        for idx, block in enumerate(self.blocks):
            for e in block:
                z[e] = idx
        return tuple(z)

    def to_labeling(self) -> Labeling:
        return Labeling(self.rgs())

    @classmethod
    def from_labeling(cls, z) -> "SetPartition":
        arr = z.z if isinstance(z, Labeling) else np.asarray(z)
        blocks = {}
        for i, lab in enumerate(arr.tolist()):
            blocks.setdefault(lab, []).append(i)
        return cls(blocks.values())

    def __eq__(self, other):
        return isinstance(other, SetPartition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return "SetPartition(%s)" % (self.blocks,)


_MAX_ENUM_N = 12


def enumerate_rgs(n: int):
    """Yield every restricted growth string of length n in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > _MAX_ENUM_N:
        raise ValueError("refusing to enumerate partitions for n=%d > %d "
                         "(Bell numbers explode)" % (n, _MAX_ENUM_N))
    a = [0] * n
    m = [0] * n
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(n: int):
    """Yield each SetPartition of {0..n-1} exactly once (n <= 12)."""
    for rgs in enumerate_rgs(n):
        yield SetPartition.from_labeling(np.asarray(rgs))


def bell_number(n: int) -> int:
    """Number of set partitions of n elements, via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def _partition_sizes(current) -> np.ndarray:
    if isinstance(current, SetPartition):
        return np.asarray(current.block_sizes(), dtype=np.int64)
    if isinstance(current, Labeling):
        return current.sizes()
    return np.asarray(current, dtype=np.int64)


def urn_weights(table: MfmPriorTable, current) -> tuple[np.ndarray, float]:
    """Unnormalized seating weights for the element that completes n items.

    `current` is a partition (or its block-size vector) of the other n-1
    elements.  Returns (per-block weights |c| + gamma, new-block weight
    gamma * V_n(t+1)/V_n(t)); the caller normalizes.
    """
    sizes = _partition_sizes(current)
    if sizes.sum() != table.n - 1:
        raise ValueError("partition covers %d elements, expected n-1=%d"
                         % (int(sizes.sum()), table.n - 1))
    t = sizes.size
    if t + 1 > table.t_max + 1 or t > table.t_max:
        raise ValueError("t=%d exceeds table range 1..%d" % (t, table.t_max))
    existing = sizes + table.gamma
    new = table.gamma * math.exp(table.log_new_cluster_ratio(t))
    return existing.astype(np.float64), float(new)


def crp_urn_weights(alpha: float, current) -> tuple[np.ndarray, float]:
    """Unnormalized Polya-urn weights: block size for existing, alpha for new."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    sizes = _partition_sizes(current)
    return sizes.astype(np.float64), float(alpha)


def log_partition_prior(table: MfmPriorTable, partition) -> float:
    """log probability of a partition of {0..n-1} under the MFM urn.

    Closed form log V_n(t) + sum_c log gamma^(|c|), with gamma^(m) the rising
    factorial; equals the telescoped product of sequential urn conditionals.
    """
    if not isinstance(partition, SetPartition):
        partition = SetPartition.from_labeling(partition)
    if partition.n != table.n:
        raise ValueError("partition of %d elements, table built for n=%d"
                         % (partition.n, table.n))
    t = partition.t
    if t > table.t_max:
        raise ValueError("t=%d exceeds table range 1..%d" % (t, table.t_max))
    sizes = np.asarray(partition.block_sizes(), dtype=np.float64)
    rising = gammaln(table.gamma + sizes) - gammaln(table.gamma)
    return float(table.log_v[t] + rising.sum())


def crp_log_partition_prior(alpha: float, partition) -> float:
    """log probability of a partition under the CRP with concentration alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not isinstance(partition, SetPartition):
        partition = SetPartition.from_labeling(partition)
    sizes = np.asarray(partition.block_sizes(), dtype=np.float64)
    return float(partition.t * math.log(alpha) + gammaln(sizes).sum()
                 - (gammaln(alpha + partition.n) - gammaln(alpha)))


_CACHE_VERSION = 1


def save_table(table: MfmPriorTable, path) -> None:
    """Write the table as a versioned JSON cache record."""
    record = {
        "version": _CACHE_VERSION,
        "n": table.n,
        "gamma": table.gamma,
        "t_max": table.t_max,
        "pmf": table.pmf.descriptor,
        "log_v": [None if np.isneginf(v) else float(v) for v in table.log_v],
    }
    with open(path, "w") as fh:
        json.dump(record, fh)


def load_table(path) -> MfmPriorTable:
    with open(path) as fh:
        record = json.load(fh)
    if record.get("version") != _CACHE_VERSION:
        raise ValueError("unsupported table cache version %r" % record.get("version"))
    log_v = np.asarray([-np.inf if v is None else v for v in record["log_v"]])
    return MfmPriorTable(n=int(record["n"]), gamma=float(record["gamma"]),
                         t_max=int(record["t_max"]), log_v=log_v,
                         pmf=ComponentPmf.from_descriptor(record["pmf"]))
