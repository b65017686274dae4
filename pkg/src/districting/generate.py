"""Synthetic instances: rook grids and Delaunay-based planar graphs."""
from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .graph import AdjacencyGraph, build_graph


def _populations(n: int, rng: np.random.Generator | None, low: int, high: int) -> list[int]:
    if rng is None:
        return [1] * n
    if not 0 <= low <= high:
        raise ValueError(f"invalid population range [{low}, {high}]")
    return rng.integers(low, high + 1, size=n).tolist()


def grid_instance(
    rows: int,
    cols: int,
    random_pops: bool = False,
    seed: int = 0,
    pop_range: tuple[int, int] = (1000, 5000),
) -> AdjacencyGraph:
    """``rows x cols`` rook grid with ids ``r{row}c{col}``."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
    rng = np.random.default_rng(seed) if random_pops else None
    pops = _populations(rows * cols, rng, *pop_range)
    ids = [f"r{r}c{c}" for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((f"r{r}c{c}", f"r{r}c{c + 1}"))
            if r + 1 < rows:
                edges.append((f"r{r}c{c}", f"r{r + 1}c{c}"))
    return build_graph(zip(ids, pops), edges)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def random_planar_instance(
    n: int,
    seed: int = 0,
    target_edges: int | None = None,
    pop_range: tuple[int, int] = (1000, 5000),
) -> AdjacencyGraph:
    """Delaunay triangulation of ``n`` uniform random points in the unit square.

    With ``target_edges`` below the triangulation's edge count, random edges
    outside a random spanning tree are dropped, so the graph stays connected.
    Node ids are ``p0``, ``p1``, ...
    """
    if n < 3:
        raise ValueError("random-planar needs at least 3 nodes")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tri = Delaunay(pts)
    edge_set: set[tuple[int, int]] = set()
    for simplex in tri.simplices:
        a, b, c = sorted(int(x) for x in simplex)
        edge_set.update(((a, b), (b, c), (a, c)))
    edges = sorted(edge_set)

    if target_edges is not None:
        if target_edges < n - 1:
            raise ValueError(f"a connected graph on {n} nodes needs at least {n - 1} edges")
        if target_edges < len(edges):
            order = rng.permutation(len(edges))
            parent = list(range(n))
            tree, rest = [], []
            for i in order:
                u, v = edges[i]
                ru, rv = _find(parent, u), _find(parent, v)
                if ru != rv:
                    parent[ru] = rv
                    tree.append(edges[i])
                else:
                    rest.append(edges[i])
            edges = sorted(tree + rest[: target_edges - len(tree)])

    pops = _populations(n, rng, *pop_range)
    return build_graph(((f"p{i}", p) for i, p in enumerate(pops)), ((f"p{u}", f"p{v}") for u, v in edges))
