"""Undirected graphs, normalized Laplacians, and node-selection utilities.

Node ids are 0-based throughout the Python API. Edge-list files use
1-based ids (see :func:`load_edge_list` / :func:`save_edge_list`).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class GraphError(ValueError):
    """Invalid graph construction or operation."""


class EdgeListParseError(GraphError):
    """Malformed edge-list file; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FeasibilityError(GraphError):
    """A marker-placement request cannot be satisfied on this graph."""


def _canonical_edges(p: int, edges) -> np.ndarray:
    e = np.asarray(edges, dtype=np.int64)
    if e.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if e.ndim != 2 or e.shape[1] != 2:
        raise GraphError("edges must be an (m, 2) array of node pairs")
    if e.min() < 0 or e.max() >= p:
        raise GraphError("edge endpoint out of range [0, p)")
    if np.any(e[:, 0] == e[:, 1]):
        raise GraphError("self-loops are not allowed")
    e = np.sort(e, axis=1)
    e = np.unique(e, axis=0)
    return e


@dataclass(frozen=True)
class Network:
    """Simple undirected graph: node count plus a canonical edge array.

    ``edges`` is stored with u < v, sorted lexicographically, duplicates
    removed. ``degrees`` is derived. Instances are immutable and safe to
    share across threads/processes.
    """

    p: int
    edges: np.ndarray
    degrees: np.ndarray = field(init=False, repr=False)
    _adj_indptr: np.ndarray = field(init=False, repr=False)
    _adj_indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.p < 1:
            raise GraphError("node count must be positive")
        e = _canonical_edges(self.p, self.edges)
        deg = np.bincount(e.ravel(), minlength=self.p).astype(np.int64)
        adj = sp.csr_matrix(
            (np.ones(2 * len(e)), (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])),
            shape=(self.p, self.p),
        )
        adj.sort_indices()
        for arr in (e, deg, adj.indptr, adj.indices):
            arr.flags.writeable = False
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "degrees", deg)
        object.__setattr__(self, "_adj_indptr", adj.indptr)
        object.__setattr__(self, "_adj_indices", adj.indices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, j: int) -> np.ndarray:
        return self._adj_indices[self._adj_indptr[j]:self._adj_indptr[j + 1]]

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self._adj_indices))
        return sp.csr_matrix((data, self._adj_indices.copy(), self._adj_indptr.copy()),
                             shape=(self.p, self.p))

    def __eq__(self, other):
        return (isinstance(other, Network) and self.p == other.p
                and np.array_equal(self.edges, other.edges))


@dataclass(frozen=True)
class DistanceMatrix:
    """Shortest-path hop counts; unreachable pairs are ``inf``."""

    hops: np.ndarray

    def save_csv(self, path):
        np.savetxt(path, self.hops, delimiter=",", fmt="%.1f")


def normalized_laplacian(net: Network) -> sp.csr_matrix:
    """Normalized graph Laplacian as a sparse symmetric matrix.

    Diagonal is 1 for nodes of nonzero degree, off-diagonal -1/sqrt(d_j d_k)
    on edges. Isolated nodes store an explicit diagonal zero so the matrix
    always carries p + 2*|edges| entries. Isolated nodes make the latent
    prior variance collapse to the ridge term alone, so their presence is
    warned about.
    """
    isolated = np.flatnonzero(net.degrees == 0)
    if isolated.size:
        warnings.warn(
            f"graph has {isolated.size} isolated node(s) {isolated.tolist()[:10]}; "
            "their prior precision reduces to the ridge epsilon alone",
            stacklevel=2,
        )
    e = net.edges
    inv_sqrt = np.zeros(net.p)
    nz = net.degrees > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(net.degrees[nz])
    w = -inv_sqrt[e[:, 0]] * inv_sqrt[e[:, 1]]
    rows = np.r_[np.arange(net.p), e[:, 0], e[:, 1]]
    cols = np.r_[np.arange(net.p), e[:, 1], e[:, 0]]
    vals = np.r_[nz.astype(np.float64), w, w]
    return sp.coo_matrix((vals, (rows, cols)), shape=(net.p, net.p)).tocsr()


def barabasi_albert(p: int, m: int, seed) -> Network:
    """Preferential-attachment graph grown from a single seed node.

    One node is added per step and attaches ``min(m, #existing)`` edges to
    distinct existing nodes with probability proportional to their degree
    (degree-0 nodes get weight 1 so the seed node is reachable). With m=1
    the result is a spanning tree.
    """
    if p < 2:
        raise GraphError("barabasi_albert requires p >= 2")
    if m < 1:
        raise GraphError("barabasi_albert requires m >= 1")
    rng = np.random.default_rng(seed)
    deg = np.zeros(p, dtype=np.int64)
    edges = []
    for new in range(1, p):
        k = min(m, new)
        # degree-proportional weights; degree-0 (the seed node, pre-attachment)
        # gets weight 1 so it can be chosen at all
        w = np.maximum(deg[:new], 1).astype(np.float64)
        targets = rng.choice(new, size=k, replace=False, p=w / w.sum())
        for t in targets:
            edges.append((int(t), new))
        deg[targets] += 1
        deg[new] = k
    return Network(p, np.asarray(edges, dtype=np.int64))


def shortest_path_hops(net: Network) -> DistanceMatrix:
    """All-pairs BFS hop distances (inf where unreachable)."""
    d = csgraph.shortest_path(net.adjacency(), method="D", directed=False,
                              unweighted=True)
    return DistanceMatrix(d)


def pick_marker_nodes(net: Network, k: int, mode: str, seed,
                      max_attempts: int = 1000) -> np.ndarray:
    """Choose k nodes that induce a connected subgraph, or a mutually
    non-adjacent set, depending on ``mode``.

    connected: randomized BFS growth from a uniformly random start node,
    restarting (bounded) when the reachable component is too small.
    disconnected: rejection sampling of uniform k-subsets.
    """
    if not 1 <= k <= net.p:
        raise GraphError("k must be in [1, p]")
    if mode not in ("connected", "disconnected"):
        raise GraphError(f"unknown marker mode {mode!r}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        if mode == "connected":
            start = int(rng.integers(net.p))
            chosen = {start}
            frontier = [v for v in net.neighbors(start)]
            while len(chosen) < k and frontier:
                idx = int(rng.integers(len(frontier)))
                v = int(frontier.pop(idx))
                if v in chosen:
                    continue
                chosen.add(v)
                frontier.extend(u for u in net.neighbors(v) if u not in chosen)
            if len(chosen) == k:
                return np.array(sorted(chosen), dtype=np.int64)
        else:
            chosen = rng.choice(net.p, size=k, replace=False)
            cs = set(int(c) for c in chosen)
            if all(not (set(net.neighbors(c)) & cs) for c in cs):
                return np.sort(chosen).astype(np.int64)
    raise FeasibilityError(
        f"could not find {k} {mode} nodes in {max_attempts} attempts")


def permute_node_labels(net: Network, fraction: float, seed) -> Network:
    """Relabel a random ceil(fraction*p) subset of nodes by a fixed-point-free
    shuffle among themselves; degree multiset is preserved."""
    if not 0.0 <= fraction <= 1.0:
        raise GraphError("fraction must be in [0, 1]")
    k = int(np.ceil(fraction * net.p))
    if k < 2:
        return net
    rng = np.random.default_rng(seed)
    chosen = rng.choice(net.p, size=k, replace=False)
    perm = rng.permutation(k)
    for _ in range(100):
        if not np.any(perm == np.arange(k)):
            break
        perm = rng.permutation(k)
    else:
        perm = np.roll(np.arange(k), 1)
    mapping = np.arange(net.p)
    mapping[chosen] = chosen[perm]
    return Network(net.p, mapping[net.edges])


def save_edge_list(net: Network, path) -> None:
    """Write a 1-based whitespace-delimited edge list with a '# p N' header."""
    with open(path, "w") as fh:
        fh.write(f"# p {net.p}\n")
        for u, v in net.edges:
            fh.write(f"{u + 1} {v + 1}\n")


def load_edge_list(path, p: int | None = None) -> Network:
    """Parse a 1-based edge list. Node count comes from the ``p`` argument,
    a '# p N' header, or the maximum id seen, in that order of precedence."""
    edges = []
    header_p = None
    max_id = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "p" and parts[1].isdigit():
                    header_p = int(parts[1])
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(f"expected two node ids, got {line!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(f"non-integer node id in {line!r}", lineno) from None
            if u < 1 or v < 1:
                raise EdgeListParseError("node ids are 1-based and must be >= 1", lineno)
            if u == v:
                raise EdgeListParseError(f"self-loop {u}-{v}", lineno)
            if p is not None and (u > p or v > p):
                raise EdgeListParseError(f"node id exceeds p={p}", lineno)
            max_id = max(max_id, u, v)
            edges.append((u - 1, v - 1))
    n = p if p is not None else (header_p if header_p is not None else max_id)
    if n == 0:
        raise GraphError(f"{path}: empty edge list and no node count given")
    if header_p is not None and max_id > n:
        raise GraphError(f"{path}: edge ids exceed declared node count")
    return Network(n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))
