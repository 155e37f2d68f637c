"""Text formats: edge lists, adjacency CSV, label files.

All files use 1-based node ids and labels; conversion to the package's
0-based internals happens here.
"""

from __future__ import annotations

import numpy as np

from .graphs import AdjacencyMatrix, Labeling

__all__ = [
    "FileFormatError",
    "read_edge_list",
    "write_edge_list",
    "read_adjacency_csv",
    "write_adjacency_csv",
    "read_labels",
    "write_labels",
    "read_graph",
]


class FileFormatError(ValueError):
    """Parse failure carrying the offending 1-based line number."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__("%s:%d: %s" % (self.path, line, message))


def read_edge_list(path, n: int | None = None) -> AdjacencyMatrix:
    """Read an undirected edge list: one "i j" pair per line, 1-based ids.

    Each edge must be listed once; duplicates and self-loops are rejected
    with a line-numbered error.  `n` defaults to the largest id seen.
    """
    edges = []
    max_id = 0
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FileFormatError(path, ln, "expected two node ids, got %r" % line)
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise FileFormatError(path, ln, "non-integer node id in %r" % line) from None
            if i < 1 or j < 1:
                raise FileFormatError(path, ln, "node ids are 1-based, got (%d, %d)" % (i, j))
            if i == j:
                raise FileFormatError(path, ln, "self-loop at node %d" % i)
            edges.append((ln, i - 1, j - 1))
            max_id = max(max_id, i, j)
    if n is None:
        n = max_id
    if n < 2:
        raise ValueError("%s: graph needs at least 2 nodes" % path)
    a = np.zeros((n, n), dtype=np.uint8)
    for ln, i, j in edges:
        if i >= n or j >= n:
            raise FileFormatError(path, ln, "node id exceeds n=%d" % n)
        if a[i, j]:
            raise FileFormatError(path, ln, "duplicate edge (%d, %d)" % (i + 1, j + 1))
        a[i, j] = a[j, i] = 1
    return AdjacencyMatrix(a)


def write_edge_list(A: AdjacencyMatrix, path) -> None:
    """Write each edge once as "i j" with i < j, 1-based."""
    with open(path, "w") as fh:
        for i, j in A.edges():
            fh.write("%d %d\n" % (i + 1, j + 1))


def read_adjacency_csv(path) -> AdjacencyMatrix:
    """Read an n x n comma-separated 0/1 matrix."""
    rows = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rows.append([int(tok) for tok in line.split(",")])
            except ValueError:
                raise FileFormatError(path, ln, "non-integer entry") from None
    if not rows:
        raise ValueError("%s: empty adjacency file" % path)
    width = len(rows[0])
    for ln, row in enumerate(rows, start=1):
        if len(row) != width:
            raise FileFormatError(path, ln, "ragged row (%d columns, expected %d)"
                                  % (len(row), width))
    return AdjacencyMatrix(np.asarray(rows))


def write_adjacency_csv(A: AdjacencyMatrix, path) -> None:
    with open(path, "w") as fh:
        for row in A.matrix:
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def read_labels(path, n: int | None = None) -> Labeling:
    """Read one 1-based integer label per line."""
    labels = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise FileFormatError(path, ln, "non-integer label %r" % line) from None
            if labels[-1] < 1:
                raise FileFormatError(path, ln, "labels are 1-based, got %d" % labels[-1])
    if n is not None and len(labels) != n:
        raise ValueError("%s: %d labels for n=%d nodes" % (path, len(labels), n))
    return Labeling.from_one_based(labels)


def write_labels(z: Labeling, path) -> None:
    with open(path, "w") as fh:
        for lab in z.to_one_based():
            fh.write("%d\n" % lab)


def read_graph(path, n: int | None = None) -> AdjacencyMatrix:
    """Dispatch on content: comma-separated rows -> adjacency CSV, else edge list."""
    with open(path) as fh:
        first = ""
        for raw in fh:
            if raw.strip():
                first = raw
                break
    if "," in first:
        return read_adjacency_csv(path)
    return read_edge_list(path, n=n)
