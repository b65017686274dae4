"""Rounding of a fractional seed to a connected partition.

Every empty district first takes the unassigned node it values most. After
that, districts grow one node at a time: among all unassigned nodes adjacent
to some district, the (node, district) pair with the largest seed value wins.
Admissible pairs sit in a heap; entries for nodes that were assigned in the
meantime are discarded when popped.
"""
from __future__ import annotations

import heapq

import numpy as np

from .graph import AdjacencyGraph, GraphError
from .model import Plan


def check_seed(seed: np.ndarray, n: int, k: int) -> np.ndarray:
    seed = np.asarray(seed, dtype=float)
    if seed.shape != (n, k):
        raise ValueError(f"seed has shape {seed.shape}, expected ({n}, {k})")
    return seed


def round_to_plan(
    seed: np.ndarray,
    g: AdjacencyGraph,
    k: int,
    tie_rng: np.random.Generator | None = None,
    steps: list[tuple[int, int]] | None = None,
) -> Plan:
    """Nearest connected k-partition to ``seed`` (an ``n x k`` array).

    Ties go to the lower node id, then the lower district label, unless
    ``tie_rng`` is given, in which case they are broken uniformly at random.
    If ``steps`` is a list, the ``(node, district)`` assignments are appended
    to it in the order they are made.
    """
    n = g.node_count
    if k > n:
        raise ValueError(f"k exceeds node count ({k} > {n})")
    seed = check_seed(seed, n, k)
    vals = seed.tolist()
    adj = g.adjacency
    assign = [-1] * n

    for d in range(k):
        col = seed[:, d]
        if tie_rng is None:
            u = int(col.argmax())
            if assign[u] >= 0:
                col = np.where(np.asarray(assign) >= 0, -np.inf, col)
                u = int(col.argmax())
        else:
            col = np.where(np.asarray(assign) >= 0, -np.inf, col)
            u = int(tie_rng.choice(np.flatnonzero(col == col.max())))
        assign[u] = d
        if steps is not None:
            steps.append((u, d))

    heap: list[tuple] = []
    push = heapq.heappush
    if tie_rng is None:
        for u in range(n):
            d = assign[u]
            if d >= 0:
                for w in adj[u]:
                    if assign[w] < 0:
                        push(heap, (-vals[w][d], w, d))
    else:
        rand = tie_rng.random
        for u in range(n):
            d = assign[u]
            if d >= 0:
                for w in adj[u]:
                    if assign[w] < 0:
                        push(heap, (-vals[w][d], rand(), w, d))

    remaining = n - k
    pop = heapq.heappop
    while remaining:
        if not heap:
            raise GraphError("graph is disconnected: some nodes cannot be reached by any district")
        entry = pop(heap)
        w, d = entry[-2], entry[-1]
        if assign[w] >= 0:
            continue
        assign[w] = d
        remaining -= 1
        if steps is not None:
            steps.append((w, d))
        for x in adj[w]:
            if assign[x] < 0:
                if tie_rng is None:
                    push(heap, (-vals[x][d], x, d))
                else:
                    push(heap, (-vals[x][d], tie_rng.random(), x, d))
    return tuple(assign)
