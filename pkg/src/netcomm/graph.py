"""Simple undirected graphs: storage, degree summaries and edge-list ingestion."""

import re

import numpy as np
import scipy.sparse as sp

from .exceptions import EdgeListError, SelfLoop

_HEADER = re.compile(r"^\s*n\s*=\s*(\S+)\s*$")


class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    The adjacency is held as a symmetric CSR matrix (row slices give neighbour
    lists) together with a hashed edge set for constant-time membership.
    ``labels`` optionally maps dense ids back to the tokens they were read from.
    """

    __slots__ = ("_n", "_adj", "_edges", "_labels")

    def __init__(self, n, edges=(), labels=None):
        n = int(n)
        if n < 1:
            raise ValueError(f"node count must be positive, got {n}")
        pairs = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            pairs.add((i, j) if i < j else (j, i))
        if labels is not None:
            labels = tuple(str(t) for t in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per node")
        self._n = n
        self._edges = frozenset(pairs)
        self._labels = labels
        self._adj = _csr_from_pairs(n, self._edges)

    @classmethod
    def from_adjacency(cls, A, labels=None):
        """Build from a dense or sparse 0/1 symmetric matrix with zero diagonal."""
        if sp.issparse(A):
            A = sp.coo_matrix(A)
            rows, cols, vals = A.row, A.col, A.data
            n = A.shape[0]
            if A.shape[0] != A.shape[1]:
                raise ValueError("adjacency must be square")
            keep = vals != 0
            rows, cols = rows[keep], cols[keep]
            if np.any(rows == cols):
                raise ValueError("adjacency has nonzero diagonal")
            fwd = set(zip(rows.tolist(), cols.tolist()))
            if any((j, i) not in fwd for i, j in fwd):
                raise ValueError("adjacency is not symmetric")
            return cls(n, ((i, j) for i, j in fwd if i < j), labels=labels)
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be a square 2-d array")
        if not np.all((A == 0) | (A == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diag(A) != 0):
            raise ValueError("adjacency has nonzero diagonal")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency is not symmetric")
        iu, ju = np.nonzero(np.triu(A, 1))
        return cls(A.shape[0], zip(iu.tolist(), ju.tolist()), labels=labels)

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    @property
    def labels(self):
        return self._labels

    @property
    def adjacency(self):
        """Symmetric CSR matrix (float64, values 1.0)."""
        return self._adj

    def has_edge(self, i, j):
        return ((i, j) if i < j else (j, i)) in self._edges

    def __getitem__(self, ij):
        i, j = ij
        return int(self.has_edge(i, j))

    def neighbors(self, i):
        adj = self._adj
        return adj.indices[adj.indptr[i]:adj.indptr[i + 1]]

    def to_dense(self):
        return self._adj.toarray()

    def relabel(self, perm):
        """Return the graph with node ``i`` renamed to ``perm[i]``."""
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self._n)):
            raise ValueError("perm must be a permutation of range(n)")
        labels = None
        if self._labels is not None:
            labels = [None] * self._n
            for old, new in enumerate(perm.tolist()):
                labels[new] = self._labels[old]
        return Graph(self._n, ((perm[i], perm[j]) for i, j in self._edges), labels=labels)

    def subgraph(self, nodes):
        """Induced subgraph on ``nodes``, relabelled ``0..len(nodes)-1`` in the given order."""
        nodes = [int(v) for v in nodes]
        index = {v: k for k, v in enumerate(nodes)}
        edges = [(index[i], index[j]) for i, j in self._edges if i in index and j in index]
        labels = None if self._labels is None else [self._labels[v] for v in nodes]
        return Graph(len(nodes), edges, labels=labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"Graph(n={self._n}, m={len(self._edges)})"


def _csr_from_pairs(n, pairs):
    if pairs:
        ij = np.array(sorted(pairs), dtype=np.int64)
        rows = np.concatenate([ij[:, 0], ij[:, 1]])
        cols = np.concatenate([ij[:, 1], ij[:, 0]])
    else:
        rows = cols = np.empty(0, dtype=np.int64)
    data = np.ones(rows.size, dtype=np.float64)
    adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    adj.sort_indices()
    return adj


def degrees(g):
    """Degree vector ``y`` with ``y[i] = sum_j A[i, j]`` (int64)."""
    return np.diff(g.adjacency.indptr).astype(np.int64)


def edge_count(g):
    return len(g.edges)


def from_edge_list(text, integer=False):
    """Parse an edge-list document into a :class:`Graph`.

    One edge per line as two whitespace-separated tokens; ``#`` lines and
    blank lines are skipped; an optional first directive ``n=<count>`` fixes
    the node count. Duplicate and reversed edges collapse to one.

    With ``integer=True`` tokens must be non-negative integers and are used as
    node ids directly. Otherwise tokens are arbitrary strings mapped to dense
    ids in sorted order (numeric order when every token is an integer), so the
    result does not depend on line order; the mapping is kept on
    ``Graph.labels``.
    """
    declared = None
    raw = []
    seen_data = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _HEADER.match(stripped)
        if m and not seen_data and declared is None:
            try:
                declared = int(m.group(1))
            except ValueError:
                raise EdgeListError(f"bad node count {m.group(1)!r}", line=lineno) from None
            if declared < 1:
                raise EdgeListError("declared node count must be positive", line=lineno)
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected two tokens, got {len(parts)}", line=lineno)
        u, v = parts
        if u == v:
            raise SelfLoop(lineno, u)
        seen_data = True
        raw.append((lineno, u, v))

    if integer:
        ids = []
        for lineno, u, v in raw:
            try:
                i, j = int(u), int(v)
            except ValueError:
                raise EdgeListError(f"non-integer token in {u!r} {v!r}", line=lineno) from None
            if i < 0 or j < 0:
                raise EdgeListError("negative node id", line=lineno)
            if i == j:
                raise SelfLoop(lineno, u)
            if declared is not None and max(i, j) >= declared:
                raise EdgeListError(f"node id {max(i, j)} exceeds declared n={declared}", line=lineno)
            ids.append((i, j))
        n = declared if declared is not None else (max(max(p) for p in ids) + 1 if ids else 0)
        if n == 0:
            raise EdgeListError("edge list is empty and declares no node count")
        return Graph(n, ids)

    tokens = {t for _, u, v in raw for t in (u, v)}
    if all(_is_int(t) for t in tokens):
        ordered = sorted(tokens, key=lambda t: (int(t), t))
    else:
        ordered = sorted(tokens)
    index = {t: k for k, t in enumerate(ordered)}
    n = len(ordered)
    if declared is not None:
        if declared < n:
            raise EdgeListError(f"declared n={declared} but found {n} distinct nodes")
        labels = ordered + [f"_isolated{k}" for k in range(declared - n)]
        n = declared
    else:
        labels = ordered
    if n == 0:
        raise EdgeListError("edge list is empty and declares no node count")
    return Graph(n, ((index[u], index[v]) for _, u, v in raw), labels=labels)


def read_edge_list(path, integer=False):
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(fh.read(), integer=integer)


def to_edge_list(g):
    """Serialize with an ``n=`` header and integer ids, one edge per line."""
    lines = [f"n={g.n}"]
    lines += [f"{i} {j}" for i, j in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def _is_int(tok):
    try:
        int(tok)
    except ValueError:
        return False
    return True
