"""Node-weighted undirected adjacency graphs and hop-count distances."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path


class GraphError(ValueError):
    """Raised for malformed graph input or a disconnected graph."""


@dataclass(frozen=True, eq=False)
class AdjacencyGraph:
    """Undirected graph on dense node indices ``0..n-1``.

    ``ids`` keeps the external identifier of every node in index order.
    """

    populations: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]
    ids: tuple[Hashable, ...]

    @property
    def node_count(self) -> int:
        return len(self.populations)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def total_population(self) -> int:
        return sum(self.populations)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def index_of(self, node_id: Hashable) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise GraphError(f"unknown node id {node_id!r}") from None

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = {nid: i for i, nid in enumerate(self.ids)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjacencyGraph):
            return NotImplemented
        return (
            self.populations == other.populations
            and self.adjacency == other.adjacency
            and self.ids == other.ids
        )

    __hash__ = None  # type: ignore[assignment]


def build_graph(
    nodes: Iterable[tuple[Hashable, int]],
    edges: Iterable[tuple[Hashable, Hashable]],
) -> AdjacencyGraph:
    """Build a graph from ``(id, population)`` pairs and ``(id, id)`` edges.

    Node indices follow declaration order. Repeated edges are merged.
    """
    ids: list[Hashable] = []
    pops: list[int] = []
    index: dict[Hashable, int] = {}
    for nid, pop in nodes:
        if nid in index:
            raise GraphError(f"duplicate node id {nid!r}")
        if int(pop) != pop:
            raise GraphError(f"population of {nid!r} is not an integer: {pop!r}")
        if pop < 0:
            raise GraphError(f"negative population {pop} for node {nid!r}")
        index[nid] = len(ids)
        ids.append(nid)
        pops.append(int(pop))

    nbrs: list[set[int]] = [set() for _ in ids]
    for a, b in edges:
        if a not in index:
            raise GraphError(f"edge ({a!r}, {b!r}) references unknown node {a!r}")
        if b not in index:
            raise GraphError(f"edge ({a!r}, {b!r}) references unknown node {b!r}")
        u, v = index[a], index[b]
        if u == v:
            raise GraphError(f"self-loop on node {a!r}")
        nbrs[u].add(v)
        nbrs[v].add(u)

    return AdjacencyGraph(
        populations=tuple(pops),
        adjacency=tuple(tuple(sorted(s)) for s in nbrs),
        ids=tuple(ids),
    )


def neighbors(g: AdjacencyGraph, u: int) -> set[int]:
    if not 0 <= u < g.node_count:
        raise IndexError(f"node index {u} out of range 0..{g.node_count - 1}")
    return set(g.adjacency[u])


def to_csr(g: AdjacencyGraph) -> csr_matrix:
    n = g.node_count
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(a) for a in g.adjacency], out=indptr[1:])
    indices = np.fromiter((v for a in g.adjacency for v in a), dtype=np.int32, count=int(indptr[-1]))
    data = np.ones(len(indices), dtype=np.int8)
    return csr_matrix((data, indices, indptr), shape=(n, n))


def component_sizes(g: AdjacencyGraph) -> list[int]:
    """Sizes of the connected components, largest first."""
    if g.node_count == 0:
        return []
    _, labels = connected_components(to_csr(g), directed=False)
    return sorted(np.bincount(labels).tolist(), reverse=True)


def is_connected_subset(g: AdjacencyGraph, subset: Iterable[int]) -> bool:
    """True iff ``subset`` induces a connected subgraph. The empty set counts as connected."""
    members = set(subset)
    if not members:
        return True
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in members and v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(members)


def is_connected(g: AdjacencyGraph) -> bool:
    return is_connected_subset(g, range(g.node_count))


def all_pairs_distances(g: AdjacencyGraph) -> np.ndarray:
    """Dense ``n x n`` matrix of shortest-path hop counts (uint16).

    Raises GraphError naming two mutually unreachable nodes if ``g`` is disconnected.
    """
    n = g.node_count
    if n == 0:
        return np.zeros((0, 0), dtype=np.uint16)
    dist = shortest_path(to_csr(g), method="D", directed=False, unweighted=True)
    if not np.all(np.isfinite(dist)):
        u, v = np.argwhere(~np.isfinite(dist))[0]
        raise GraphError(
            f"graph is disconnected: no path between {g.ids[u]!r} and {g.ids[v]!r}"
        )
    if dist.max(initial=0) > np.iinfo(np.uint16).max:
        raise GraphError("graph diameter exceeds 16-bit distance storage")
    out = dist.astype(np.uint16)
    out.setflags(write=False)
    return out


def grid_graph(rows: int, cols: int, populations: Sequence[int] | None = None) -> AdjacencyGraph:
    """Rook-adjacency grid; node ``r * cols + c`` sits at row r, column c."""
    n = rows * cols
    pops = [1] * n if populations is None else list(populations)
    if len(pops) != n:
        raise GraphError(f"expected {n} populations, got {len(pops)}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if c + 1 < cols:
                edges.append((u, u + 1))
            if r + 1 < rows:
                edges.append((u, u + cols))
    return build_graph(enumerate(pops), edges)
