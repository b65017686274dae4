import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from districting.graph import GraphError, build_graph, is_connected_subset
from districting.model import district_members, indicator
from districting.rounding import round_to_plan
from helpers import path_graph, random_connected_graph, random_connected_partition


def naive_round(seed, g, k):
    """Line-by-line rescan version of the rounding loop, no heap."""
    n = g.node_count
    parts = [set() for _ in range(k)]
    unassigned = set(range(n))
    plan = [-1] * n
    while unassigned:
        empty = [d for d in range(k) if not parts[d]]
        if empty:
            d = empty[0]
            u = max(sorted(unassigned), key=lambda w: seed[w][d])
        else:
            best = None
            for w in sorted(unassigned):
                for d in range(k):
                    if any(x in parts[d] for x in g.adjacency[w]):
                        if best is None or seed[w][d] > best[0]:
                            best = (seed[w][d], w, d)
            _, u, d = best
        parts[d].add(u)
        unassigned.discard(u)
        plan[u] = d
    return tuple(plan)


def figure_one():
    # nodes u1..u5 -> 0..4, districts 1, 2 -> 0, 1
    g = build_graph(
        [(f"u{i}", 1) for i in range(1, 6)],
        [("u1", "u2"), ("u2", "u4"), ("u4", "u5"), ("u2", "u3"), ("u3", "u5")],
    )
    seed = np.array([[0.90, 0.10], [0.30, 0.68], [0.20, 0.60], [0.10, 0.95], [0.40, 0.50]])
    return g, seed


def test_figure_one_walkthrough():
    g, seed = figure_one()
    steps = []
    plan = round_to_plan(seed, g, 2, steps=steps)
    assert plan == (0, 1, 1, 1, 1)
    # u1, u4 seed the empty districts; u2 beats (u2, 1) and (u5, 2); then u3, u5
    assert steps == [(0, 0), (3, 1), (1, 1), (2, 1), (4, 1)]


def test_p3_step_through():
    g = path_graph([1, 1, 1])
    seed = np.array([[0.9, 0.1], [0.2, 0.3], [0.1, 0.8]])
    steps = []
    assert round_to_plan(seed, g, 2, steps=steps) == (0, 1, 1)
    assert steps == [(0, 0), (2, 1), (1, 1)]


def test_indicator_rounds_to_itself_small():
    g = path_graph([1] * 5)
    plan = (1, 1, 0, 0, 2)
    assert round_to_plan(indicator(plan, 3), g, 3) == plan


def test_disconnected_indicator_is_not_fixed():
    g = path_graph([1] * 4)
    plan = (0, 1, 1, 0)
    out = round_to_plan(indicator(plan, 2), g, 2)
    assert out != plan
    assert all(is_connected_subset(g, m) for m in district_members(out, 2))


def test_errors():
    g = path_graph([1, 1])
    with pytest.raises(ValueError, match="k exceeds"):
        round_to_plan(np.zeros((2, 3)), g, 3)
    with pytest.raises(ValueError, match="shape"):
        round_to_plan(np.zeros((3, 2)), g, 2)
    split = build_graph([(0, 1), (1, 1), (2, 1)], [(0, 1)])
    with pytest.raises(GraphError):
        round_to_plan(np.full((3, 1), 0.5), split, 1)


def test_ties_default_lowest_node_then_district():
    g = path_graph([1] * 4)
    # node 0 seeds district 0, node 1 seeds district 1 and absorbs the rest
    assert round_to_plan(np.full((4, 2), 0.5), g, 2) == (0, 1, 1, 1)


def test_random_tie_breaking_varies_but_stays_connected():
    g = path_graph([1] * 6)
    rng = np.random.default_rng(3)
    plans = {round_to_plan(np.full((6, 2), 0.5), g, 2, tie_rng=rng) for _ in range(200)}
    assert len(plans) > 3
    for plan in plans:
        assert all(m and is_connected_subset(g, m) for m in district_members(plan, 2))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_naive_rescan(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 1, 25, extra=0.1)
    k = int(rng.integers(1, min(5, g.node_count) + 1))
    y = rng.random((g.node_count, k))
    assert round_to_plan(y, g, k) == naive_round(y, g, k)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_growth_steps_are_admissible(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 2, 30, extra=0.05)
    k = int(rng.integers(1, min(4, g.node_count) + 1))
    steps = []
    plan = round_to_plan(rng.random((g.node_count, k)), g, k, steps=steps)
    assert len(steps) == g.node_count
    assert sorted(u for u, _ in steps) == list(range(g.node_count))
    parts = [set() for _ in range(k)]
    for i, (u, d) in enumerate(steps):
        if i < k:
            assert d == i and not parts[d]
        else:
            assert parts[d] & set(g.adjacency[u])
        parts[d].add(u)
    assert all(plan[u] == d for u, d in steps)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_idempotent_on_connected_partitions(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, 4, 30, extra=0.08)
    k = int(rng.integers(2, 5))
    plan = random_connected_partition(g, k, rng)
    assert round_to_plan(indicator(plan, k), g, k) == plan


def test_equal_values_prefer_lower_district():
    g = path_graph([1, 1, 1])
    seed = np.array([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]])
    assert round_to_plan(seed, g, 2) == (0, 0, 1)
