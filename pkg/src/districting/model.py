"""Districting instances, plans and their scores.

A plan is a tuple of district labels, one per node. Scores are exact: the
compactness (gerrymander) score is an integer, while the infeasibility score
may be a ``Fraction`` because the population bounds are rational.
"""
from __future__ import annotations

import math

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

from .graph import AdjacencyGraph, GraphError, all_pairs_distances, is_connected_subset

Plan = tuple[int, ...]
Score = Union[int, Fraction]


def as_fraction(x: float | str | Rational) -> Fraction:
    """Exact value of a user-facing decimal such as ``0.05`` (read via its repr)."""
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    graph: AdjacencyGraph
    distances: np.ndarray
    k: int
    delta: Fraction
    p_bar: Fraction
    p_min: Fraction
    p_max: Fraction
    M: int
    _pops: np.ndarray = field(repr=False)
    # integer forms of the bounds: pop_lo <= pop <= pop_hi iff p_min <= pop <= p_max,
    # and bounds times _scale are exact integers
    pop_lo: int = field(init=False, repr=False)
    pop_hi: int = field(init=False, repr=False)
    _scale: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "pop_lo", math.ceil(self.p_min))
        set_(self, "pop_hi", math.floor(self.p_max))
        set_(self, "_scale", math.lcm(self.p_min.denominator, self.p_max.denominator))

    @property
    def node_count(self) -> int:
        return self.graph.node_count


@dataclass(frozen=True)
class DistrictScore:
    center: int
    score: int


def make_instance(g: AdjacencyGraph, k: int, delta: float | str | Rational = "0.05") -> ProblemInstance:
    if k < 1:
        raise ValueError(f"district count must be at least 1, got {k}")
    if k > g.node_count:
        raise ValueError(f"k exceeds node count ({k} > {g.node_count})")
    d = as_fraction(delta)
    if not 0 <= d < 1:
        raise ValueError(f"deviation must lie in [0, 1), got {delta}")
    dist = all_pairs_distances(g)
    p_bar = Fraction(g.total_population, k)
    row_max = int(dist.sum(axis=1, dtype=np.int64).max())
    return ProblemInstance(
        graph=g,
        distances=dist,
        k=k,
        delta=d,
        p_bar=p_bar,
        p_min=(1 - d) * p_bar,
        p_max=(1 + d) * p_bar,
        # one row sum bounds a single district; k of them bound any plan total
        M=1 + k * row_max,
        _pops=np.asarray(g.populations, dtype=np.int64),
    )


def check_plan(inst: ProblemInstance, plan: Sequence[int]) -> Plan:
    plan = tuple(int(x) for x in plan)
    if len(plan) != inst.node_count:
        raise ValueError(f"plan covers {len(plan)} nodes, instance has {inst.node_count}")
    bad = [x for x in plan if not 0 <= x < inst.k]
    if bad:
        raise ValueError(f"district label {bad[0]} outside 0..{inst.k - 1}")
    return plan


def indicator(plan: Sequence[int], k: int) -> np.ndarray:
    """The 0/1 matrix Y with Y[u, d] = 1 iff node u is in district d."""
    y = np.zeros((len(plan), k))
    y[np.arange(len(plan)), np.asarray(plan, dtype=np.intp)] = 1.0
    return y


def district_members(plan: Sequence[int], k: int) -> list[list[int]]:
    members: list[list[int]] = [[] for _ in range(k)]
    for u, d in enumerate(plan):
        members[d].append(u)
    return members


def district_populations(inst: ProblemInstance, plan: Sequence[int]) -> list[int]:
    counts = np.bincount(np.asarray(plan, dtype=np.intp), weights=inst._pops, minlength=inst.k)
    return [int(round(c)) for c in counts]


def district_population(inst: ProblemInstance, plan: Sequence[int], d: int) -> int:
    if not 0 <= d < inst.k:
        raise ValueError(f"district label {d} outside 0..{inst.k - 1}")
    return sum(p for p, x in zip(inst.graph.populations, plan) if x == d)


def district_score(inst: ProblemInstance, nodes: Iterable[int]) -> DistrictScore:
    """Center (lowest id among minimizers) and its summed hop distance to the district.

    Distances are measured in the whole graph, not the induced subgraph.
    """
    idx = np.fromiter(sorted(set(nodes)), dtype=np.intp)
    if idx.size == 0:
        raise ValueError("cannot score an empty district")
    sums = inst.distances[np.ix_(idx, idx)].sum(axis=1, dtype=np.int64)
    j = int(np.argmin(sums))
    return DistrictScore(center=int(idx[j]), score=int(sums[j]))


def district_scores(inst: ProblemInstance, plan: Sequence[int]) -> list[DistrictScore | None]:
    """Per-label scores; ``None`` for an empty district."""
    return [district_score(inst, m) if m else None for m in district_members(plan, inst.k)]


def population_ok(inst: ProblemInstance, pop: int) -> bool:
    return inst.pop_lo <= pop <= inst.pop_hi


def is_feasible(inst: ProblemInstance, plan: Sequence[int]) -> bool:
    """Every district nonempty, connected and inside [p_min, p_max]."""
    for pop, members in zip(district_populations(inst, plan), district_members(plan, inst.k)):
        if not members or not population_ok(inst, pop):
            return False
        if not is_connected_subset(inst.graph, members):
            return False
    return True


def total_score_phase2(inst: ProblemInstance, plan: Sequence[int]) -> int:
    members = district_members(plan, inst.k)
    total = 0
    for d, m in enumerate(members):
        if not m:
            raise ValueError(f"district {d} is empty")
        if not is_connected_subset(inst.graph, m):
            raise ValueError(f"district {d} is not connected")
        total += district_score(inst, m).score
    return total


def population_excess(inst: ProblemInstance, pops: Iterable[int]) -> Fraction:
    """Summed over- and under-population across districts (persons)."""
    scale = inst._scale
    lo = int(inst.p_min * scale)
    hi = int(inst.p_max * scale)
    excess = 0
    for p in pops:
        p *= scale
        if p > hi:
            excess += p - hi
        elif p < lo:
            excess += lo - p
    return Fraction(excess, scale)


def _normalize(x: Fraction) -> Score:
    return int(x) if x.denominator == 1 else x


def infeasibility_score(inst: ProblemInstance, plan: Sequence[int]) -> Score:
    return _normalize(inst.M + population_excess(inst, district_populations(inst, plan)))


def conditional_objective(
    inst: ProblemInstance, plan: Sequence[int], assume_connected: bool = False
) -> Score:
    """Gerrymander score for a feasible plan, infeasibility score otherwise.

    ``assume_connected`` skips the contiguity check for plans known to be
    connected partitions (e.g. rounding output).
    """
    pops = district_populations(inst, plan)
    members = district_members(plan, inst.k)
    feasible = all(members) and all(population_ok(inst, p) for p in pops)
    if feasible and not assume_connected:
        feasible = all(is_connected_subset(inst.graph, m) for m in members)
    if not feasible:
        return _normalize(inst.M + population_excess(inst, pops))
    return sum(district_score(inst, m).score for m in members)

