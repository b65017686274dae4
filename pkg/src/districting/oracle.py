"""Exhaustive ground truth for tiny instances."""
from __future__ import annotations

import itertools
from collections import deque
from typing import Iterator

from .graph import AdjacencyGraph, is_connected_subset
from .model import Plan, ProblemInstance, Score, district_members, district_score, is_feasible

MAX_ORACLE_NODES = 16


class OracleLimitError(ValueError):
    pass


def _guard(g: AdjacencyGraph) -> None:
    if g.node_count > MAX_ORACLE_NODES:
        raise OracleLimitError(
            f"brute force is limited to {MAX_ORACLE_NODES} nodes, graph has {g.node_count}"
        )


def _bfs_order(g: AdjacencyGraph) -> list[int]:
    order: list[int] = []
    seen: set[int] = set()
    for root in range(g.node_count):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return order


def _can_connect(g: AdjacencyGraph, members: list[int], pool: set[int]) -> bool:
    """Whether ``members`` lie in one component of the subgraph induced by ``members | pool``."""
    allowed = pool.union(members)
    seen = {members[0]}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return all(m in seen for m in members)


def enumerate_connected_partitions(g: AdjacencyGraph, k: int) -> Iterator[Plan]:
    """Yield every labeled plan whose k districts are all nonempty and connected.

    Nodes are labeled in BFS order; a branch is cut as soon as some district
    can no longer be joined up through the still unlabeled nodes, or there are
    fewer unlabeled nodes than empty districts.
    """
    _guard(g)
    n = g.node_count
    if k < 1 or k > n:
        return
    order = _bfs_order(g)
    assign = [-1] * n
    members: list[list[int]] = [[] for _ in range(k)]

    def viable(pos: int) -> bool:
        pool = set(order[pos:])
        empty = sum(1 for m in members if not m)
        if empty > len(pool):
            return False
        return all(not m or _can_connect(g, m, pool) for m in members)

    def rec(pos: int) -> Iterator[Plan]:
        if pos == n:
            yield tuple(assign)
            return
        u = order[pos]
        for d in range(k):
            assign[u] = d
            members[d].append(u)
            if viable(pos + 1):
                yield from rec(pos + 1)
            members[d].pop()
        assign[u] = -1

    yield from rec(0)


def enumerate_by_filter(g: AdjacencyGraph, k: int) -> Iterator[Plan]:
    """Same set as :func:`enumerate_connected_partitions`, by checking all k**n label vectors."""
    _guard(g)
    for plan in itertools.product(range(k), repeat=g.node_count):
        parts = district_members(plan, k)
        if all(parts) and all(is_connected_subset(g, p) for p in parts):
            yield plan


def brute_force_optimum(inst: ProblemInstance) -> tuple[Plan | None, Score | None]:
    """Feasible plan of least gerrymander score, or ``(None, None)`` if none exists.

    Ties keep the first plan in enumeration order.
    """
    best_plan: Plan | None = None
    best: int | None = None
    for plan in enumerate_connected_partitions(inst.graph, inst.k):
        if not is_feasible(inst, plan):
            continue
        score = sum(district_score(inst, m).score for m in district_members(plan, inst.k))
        if best is None or score < best:
            best_plan, best = plan, score
    return best_plan, best
