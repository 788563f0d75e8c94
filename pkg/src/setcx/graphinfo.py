"""Shannon information of simple graphs.

Each node's information is the binary entropy of its connection
probability ``degree / (n - 1)``. The distance between two nodes is one minus
the mutual information of their connection patterns to the remaining n - 2
nodes. Both quantities are in bits and lie in [0, 1].
"""
from __future__ import annotations

import csv
import io
from itertools import combinations
from pathlib import Path

import numpy as np

from .bitstrings import make_rng
from .errors import DomainError, FormatError

__all__ = [
    "Graph",
    "GRAPH_MODES",
    "node_complexities",
    "node_complexity",
    "node_distances",
    "node_distance",
    "graph_psi",
    "conjugate",
    "maximize_psi",
    "two_cliques",
    "complete_bipartite",
    "erdos_renyi",
    "read_graph",
    "write_graph_psi_csv",
]

GRAPH_MODES = ("global", "pairwise")


class Graph:
    """Simple undirected unweighted graph held as a 0/1 adjacency matrix."""

    __slots__ = ("adjacency",)

    def __init__(self, adjacency):
        a = np.array(adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("adjacency matrix must be square")
        if a.size and not np.isin(a, (0, 1)).all():
            raise DomainError("adjacency entries must be 0 or 1")
        a = a.astype(np.uint8)
        if np.any(np.diag(a)):
            raise DomainError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise DomainError("adjacency matrix must be symmetric")
        a.flags.writeable = False
        self.adjacency = a

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = np.zeros((n, n), dtype=np.uint8)
        seen = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise DomainError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DomainError(f"duplicate edge {key}")
            seen.add(key)
            a[i, j] = a[j, i] = 1
        return cls(a)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=np.uint8))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(1 - np.eye(n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        ii, jj = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(ii.tolist(), jj.tolist()))

    def relabel(self, perm) -> "Graph":
        """Graph with node ``perm[v]`` playing the role of old node v."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        return Graph(self.adjacency[np.ix_(inv, inv)])

    def toggle(self, i: int, j: int) -> "Graph":
        a = self.adjacency.copy()
        a[i, j] ^= 1
        a[j, i] ^= 1
        return Graph(a)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.n_edges})"


def _h2(p):
    """Binary entropy in bits, elementwise, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        b = np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return a + b


def _plogp_ratio(pab, pa, pb):
    with np.errstate(divide="ignore", invalid="ignore"):
        t = pab * np.log2(pab / (pa * pb))
    return np.where(pab > 0, t, 0.0)


def node_complexities(G: Graph) -> np.ndarray:
    """Entropy of every node's connection probability."""
    if G.n < 2:
        raise DomainError("node complexity needs n >= 2")
    return _h2(G.degrees / (G.n - 1))


def node_complexity(G: Graph, i: int) -> float:
    return float(node_complexities(G)[i])


def node_distances(G: Graph) -> np.ndarray:
    """Matrix of 1 - I(i:j) over all node pairs; zero diagonal.

    For a pair (i, j) the joint distribution is the frequency of the
    pattern (A_ik, A_jk) over the n - 2 nodes k other than i and j, and the
    marginals are taken over the same nodes.
    """
    n = G.n
    if n < 3:
        raise DomainError("node distance needs n >= 3 (no third nodes otherwise)")
    a = G.adjacency.astype(np.int64)
    deg = a.sum(axis=1)
    m = n - 2
    n11 = a @ a  # common neighbours; i and j never count themselves (zero diagonal)
    ri = deg[:, None] - a  # neighbours of i among third nodes
    rj = deg[None, :] - a
    n10 = ri - n11
    n01 = rj - n11
    n00 = m - n11 - n10 - n01
    pi1, pj1 = ri / m, rj / m
    pi0, pj0 = 1.0 - pi1, 1.0 - pj1
    np.fill_diagonal(n00, 0)
    mi = (_plogp_ratio(n11 / m, pi1, pj1) + _plogp_ratio(n10 / m, pi1, pj0)
          + _plogp_ratio(n01 / m, pi0, pj1) + _plogp_ratio(n00 / m, pi0, pj0))
    d = 1.0 - mi
    np.fill_diagonal(d, 0.0)  # i == j rows are not a pair
    assert np.all(d > -1e-9) and np.all(d < 1 + 1e-9), "binary MI left [0, 1]"
    d = np.clip(d, 0.0, 1.0)
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return d


def node_distance(G: Graph, i: int, j: int) -> float:
    if i == j:
        raise DomainError("node distance needs two different nodes")
    return float(node_distances(G)[i, j])


def graph_psi(G: Graph, mode: str = "global") -> float:
    """Set complexity of a graph.

    ``"global"``: (sum_i K_i) * 2/(n(n-1)) * sum over pairs d(1-d).
    ``"pairwise"``: 1/(n-1) * sum over pairs max(K_i, K_j) d(1-d).
    """
    if mode not in GRAPH_MODES:
        raise DomainError(f"mode must be one of {GRAPH_MODES}")
    n = G.n
    if n < 3:
        raise DomainError("graph complexity needs n >= 3")
    K = node_complexities(G)
    d = node_distances(G)
    ii, jj = np.tril_indices(n, -1)
    kern = d[ii, jj] * (1.0 - d[ii, jj])
    if mode == "global":
        return float(np.sort(K).sum() * 2.0 / (n * (n - 1)) * np.sort(kern).sum())
    w = np.maximum(K[ii], K[jj]) * kern
    return float(np.sort(w).sum() / (n - 1))


def conjugate(G: Graph) -> Graph:
    """Edge complement; the diagonal stays zero."""
    a = 1 - G.adjacency
    np.fill_diagonal(a, 0)
    return Graph(a)


def two_cliques(n: int) -> Graph:
    """Disjoint union of two complete graphs on n/2 nodes (n even)."""
    if n % 2:
        raise DomainError("two_cliques needs an even n")
    h = n // 2
    a = np.zeros((n, n), dtype=np.uint8)
    a[:h, :h] = 1
    a[h:, h:] = 1
    np.fill_diagonal(a, 0)
    return Graph(a)


def complete_bipartite(a: int, b: int) -> Graph:
    n = a + b
    m = np.zeros((n, n), dtype=np.uint8)
    m[:a, a:] = 1
    m[a:, :a] = 1
    return Graph(m)


def erdos_renyi(n: int, p: float, rng) -> Graph:
    rng = make_rng(rng)
    upper = np.triu(rng.random((n, n)) < p, 1).astype(np.uint8)
    return Graph(upper + upper.T)


def maximize_psi(n: int, iterations: int = 2000, restarts: int = 20, rng=0,
                 mode: str = "global"):
    """Stochastic hill-climb for a high-complexity graph on n nodes.

    Each restart starts from a random graph with edge probability 1/2 and
    repeatedly tries single-edge toggles in random order, moving only on a
    strict improvement, until `iterations` toggles have been tried or no
    toggle improves. Returns ``(best_graph, best_psi)``; a later restart
    replaces the incumbent only if strictly better.
    """
    if n < 4:
        raise DomainError("maximize_psi needs n >= 4")
    rng = make_rng(rng)
    pairs = list(combinations(range(n), 2))
    best_g, best_v = None, -np.inf
    for _ in range(restarts):
        a = np.triu(rng.random((n, n)) < 0.5, 1).astype(np.uint8)
        a = a + a.T
        cur = graph_psi(Graph(a), mode)
        tried = 0
        while tried < iterations:
            improved = False
            for idx in rng.permutation(len(pairs)):
                if tried >= iterations:
                    break
                tried += 1
                i, j = pairs[idx]
                a[i, j] ^= 1
                a[j, i] ^= 1
                v = graph_psi(Graph(a), mode)
                if v > cur:
                    cur = v
                    improved = True
                    break
                a[i, j] ^= 1
                a[j, i] ^= 1
            if not improved:
                break
        if cur > best_v:
            best_g, best_v = Graph(a), cur
    return best_g, best_v


def read_graph(path) -> Graph:
    """Read a dense 0/1 matrix or an edge list.

    A file whose first data line has more than two fields, or whose lines
    all have equal length matching the line count, is read as a dense
    matrix; otherwise as ``i j`` edge lines (0-based). An optional
    ``# n=N`` comment fixes the node count of an edge list.
    """
    path = Path(path)
    rows = []
    n_hint = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            if key.strip() == "n":
                try:
                    n_hint = int(val)
                except ValueError:
                    raise FormatError("bad node count", path, lineno) from None
            continue
        try:
            rows.append((lineno, [int(t) for t in line.split()]))
        except ValueError:
            raise FormatError("non-integer entry", path, lineno) from None
    if not rows:
        raise FormatError("no graph data", path)
    width = len(rows[0][1])
    dense = width > 2 or (width == len(rows) and all(len(r) == width for _, r in rows)
                          and all(v in (0, 1) for _, r in rows for v in r) and n_hint is None)
    if dense:
        n = len(rows)
        for lineno, r in rows:
            if len(r) != n:
                raise FormatError(f"expected {n} entries, got {len(r)}", path, lineno)
            if any(v not in (0, 1) for v in r):
                raise FormatError("matrix entries must be 0 or 1", path, lineno)
        a = np.array([r for _, r in rows], dtype=np.uint8)
        for i, (lineno, _) in enumerate(rows):
            if a[i, i]:
                raise FormatError(f"self-loop at node {i}", path, lineno)
            bad = np.nonzero(a[i, :i] != a[:i, i])[0]
            if bad.size:
                raise FormatError(f"asymmetric entry ({i}, {bad[0]})", path, lineno)
        return Graph(a)
    seen = {}
    top = -1
    for lineno, r in rows:
        if len(r) != 2:
            raise FormatError("edge lines need exactly two node indices", path, lineno)
        i, j = r
        if i < 0 or j < 0:
            raise FormatError("negative node index", path, lineno)
        if i == j:
            raise FormatError(f"self-loop at node {i}", path, lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"duplicate edge {key} (first on line {seen[key]})", path, lineno)
        seen[key] = lineno
        top = max(top, i, j)
    n = n_hint if n_hint is not None else top + 1
    if top >= n:
        raise FormatError(f"node index {top} exceeds n={n}", path)
    return Graph.from_edges(n, seen)


def write_graph_psi_csv(G: Graph, psi_value: float, mode: str, out=None, header_lines=()):
    buf = io.StringIO() if out is None else out
    for line in header_lines:
        buf.write(f"#{line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "edges", "psi", "mode"])
    w.writerow([G.n, G.n_edges, repr(psi_value), mode])
    return buf.getvalue() if out is None else None
