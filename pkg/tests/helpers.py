"""Random graph and partition builders shared by the tests."""
import numpy as np

from districting.graph import AdjacencyGraph, build_graph


def random_connected_graph(rng, n_min=2, n_max=30, extra=0.15, pop_range=(1, 100)):
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    n = int(rng.integers(n_min, n_max + 1))
    perm = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.add(tuple(sorted((int(perm[i]), int(perm[j])))))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    pops = rng.integers(pop_range[0], pop_range[1] + 1, size=n).tolist()
    return build_graph(enumerate(pops), sorted(edges))


def random_connected_partition(g: AdjacencyGraph, k: int, rng) -> tuple:
    """Grow k districts from random roots by random frontier steps."""
    n = g.node_count
    assign = [-1] * n
    for d, u in enumerate(rng.choice(n, size=k, replace=False)):
        assign[int(u)] = d
    while -1 in assign:
        frontier = [
            (w, assign[u])
            for u in range(n)
            if assign[u] >= 0
            for w in g.adjacency[u]
            if assign[w] < 0
        ]
        w, d = frontier[int(rng.integers(len(frontier)))]
        assign[w] = d
    return tuple(assign)


def floyd_warshall(g: AdjacencyGraph) -> np.ndarray:
    n = g.node_count
    inf = 10**9
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, nbrs in enumerate(g.adjacency):
        for v in nbrs:
            dist[u][v] = 1
    for m in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][m] + dist[m][j] < dist[i][j]:
                    dist[i][j] = dist[i][m] + dist[m][j]
    return np.array(dist)


def path_graph(pops):
    return build_graph(enumerate(pops), [(i, i + 1) for i in range(len(pops) - 1)])


def complete_graph(n, pop=1):
    return build_graph(((i, pop) for i in range(n)), [(u, v) for u in range(n) for v in range(u + 1, n)])
