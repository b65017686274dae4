"""CSV instance files, assignment files and run reports."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Sequence

from .graph import AdjacencyGraph, GraphError, build_graph, component_sizes, is_connected_subset
from .model import (
    Plan,
    ProblemInstance,
    Score,
    conditional_objective,
    district_members,
    district_populations,
    district_score,
    is_feasible,
    make_instance,
    population_excess,
)


class InstanceError(ValueError):
    """Malformed or inconsistent input files."""


@dataclass(frozen=True)
class InstanceFiles:
    nodes_path: Path
    edges_path: Path
    patches_path: Path | None = None


def _open_csv(path: Path, required: Sequence[str]) -> Iterable[tuple[int, dict]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise InstanceError(f"{path}: header must contain {', '.join(required)}; missing {', '.join(missing)}")
        for row in reader:
            if None in row or any(row[c] is None for c in required):
                raise InstanceError(f"{path}, line {reader.line_num}: wrong number of fields")
            yield reader.line_num, row


def read_nodes(path: Path) -> list[tuple[str, int]]:
    nodes = []
    for line, row in _open_csv(path, ("id", "population")):
        try:
            pop = int(row["population"].strip())
        except ValueError:
            raise InstanceError(
                f"{path}, line {line}: population {row['population']!r} is not an integer"
            ) from None
        nodes.append((row["id"], pop))
    return nodes


def read_edges(path: Path, known: set[str]) -> list[tuple[str, str]]:
    edges = []
    for line, row in _open_csv(path, ("source", "target")):
        a, b = row["source"], row["target"]
        for x in (a, b):
            if x not in known:
                raise InstanceError(f"{path}, line {line}: unknown node id {x!r}")
        edges.append((a, b))
    return edges


def read_graph(files: InstanceFiles) -> AdjacencyGraph:
    nodes = read_nodes(Path(files.nodes_path))
    known = {nid for nid, _ in nodes}
    edges = read_edges(Path(files.edges_path), known)
    if files.patches_path is not None:
        present = {frozenset(e) for e in edges}
        patches = read_edges(Path(files.patches_path), known)
        for a, b in patches:
            if frozenset((a, b)) in present:
                raise InstanceError(f"{files.patches_path}: patch edge ({a!r}, {b!r}) is already in the edge file")
        edges += patches
    try:
        g = build_graph(nodes, edges)
    except GraphError as exc:
        raise InstanceError(str(exc)) from None
    sizes = component_sizes(g)
    if len(sizes) > 1:
        raise InstanceError(
            f"graph is disconnected: {len(sizes)} components of sizes {sizes}; add patch edges to join them"
        )
    return g


def load_instance(files: InstanceFiles, k: int, delta: float | str | Rational = "0.05") -> ProblemInstance:
    g = read_graph(files)
    try:
        return make_instance(g, k, delta)
    except (ValueError, GraphError) as exc:
        raise InstanceError(str(exc)) from None


def write_instance(g: AdjacencyGraph, nodes_path: Path, edges_path: Path) -> None:
    with open(nodes_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "population"])
        w.writerows(zip(g.ids, g.populations))
    with open(edges_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["source", "target"])
        w.writerows((g.ids[u], g.ids[v]) for u, v in g.edges())


def write_assignment(g: AdjacencyGraph, plan: Plan, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "district"])
        w.writerows(zip(g.ids, plan))


def read_assignment(path: Path, g: AdjacencyGraph, k: int) -> Plan:
    plan = [-1] * g.node_count
    for line, row in _open_csv(path, ("id", "district")):
        nid = row["id"]
        try:
            u = g.index_of(nid)
        except GraphError:
            raise InstanceError(f"{path}, line {line}: unknown node id {nid!r}") from None
        if plan[u] >= 0:
            raise InstanceError(f"{path}, line {line}: node {nid!r} assigned twice")
        try:
            d = int(row["district"])
        except ValueError:
            raise InstanceError(f"{path}, line {line}: district {row['district']!r} is not an integer") from None
        if not 0 <= d < k:
            raise InstanceError(f"{path}, line {line}: district {d} outside 0..{k - 1}")
        plan[u] = d
    unassigned = [g.ids[u] for u, d in enumerate(plan) if d < 0]
    if unassigned:
        raise InstanceError(
            f"{path}: {len(unassigned)} node(s) missing from assignment, e.g. {unassigned[0]!r}"
        )
    return tuple(plan)


@dataclass(frozen=True)
class DistrictReport:
    label: int
    population: int
    center: str | None
    score: int | None
    node_count: int
    connected: bool


@dataclass
class RunReport:
    node_count: int
    edge_count: int
    k: int
    delta: Fraction
    p_min: Fraction
    p_max: Fraction
    M: int
    objective: Score
    feasible: bool
    gerrymander_score: int
    population_excess: Fraction
    districts: list[DistrictReport]
    first_feasible_trial: int | None = None
    total_trials: int | None = None
    rng_seed: int | None = None
    wall_time: float | None = field(default=None, compare=False)

    def lines(self) -> list[str]:
        """``key=value`` lines. Wall time is left out so reports are reproducible."""
        def fmt(x: object) -> str:
            if isinstance(x, bool):
                return "true" if x else "false"
            if x is None:
                return "none"
            return str(x)

        out = [
            f"node_count={self.node_count}",
            f"edge_count={self.edge_count}",
            f"districts={self.k}",
            f"deviation={fmt(self.delta)}",
            f"p_min={fmt(self.p_min)}",
            f"p_max={fmt(self.p_max)}",
            f"big_m={self.M}",
            f"objective={fmt(self.objective)}",
            f"feasible={fmt(self.feasible)}",
            f"gerrymander_score={self.gerrymander_score}",
            f"population_excess={fmt(self.population_excess)}",
            f"first_feasible_trial={fmt(self.first_feasible_trial)}",
            f"total_trials={fmt(self.total_trials)}",
            f"rng_seed={fmt(self.rng_seed)}",
        ]
        for d in self.districts:
            p = f"district.{d.label}."
            out += [
                f"{p}population={d.population}",
                f"{p}center={fmt(d.center)}",
                f"{p}score={fmt(d.score)}",
                f"{p}node_count={d.node_count}",
                f"{p}connected={fmt(d.connected)}",
            ]
        return out

    def write(self, path: Path) -> None:
        Path(path).write_text("\n".join(self.lines()) + "\n", encoding="utf-8")


def parse_report(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def evaluate_plan(inst: ProblemInstance, plan: Plan) -> RunReport:
    """Score an arbitrary plan, e.g. one produced outside this package."""
    g = inst.graph
    pops = district_populations(inst, plan)
    districts = []
    total = 0
    for d, members in enumerate(district_members(plan, inst.k)):
        if members:
            ds = district_score(inst, members)
            total += ds.score
            center, score = str(g.ids[ds.center]), ds.score
        else:
            center, score = None, None
        districts.append(
            DistrictReport(
                label=d,
                population=pops[d],
                center=center,
                score=score,
                node_count=len(members),
                connected=bool(members) and is_connected_subset(g, members),
            )
        )
    return RunReport(
        node_count=g.node_count,
        edge_count=g.edge_count,
        k=inst.k,
        delta=inst.delta,
        p_min=inst.p_min,
        p_max=inst.p_max,
        M=inst.M,
        objective=conditional_objective(inst, plan),
        feasible=is_feasible(inst, plan),
        gerrymander_score=total,
        population_excess=population_excess(inst, pops),
        districts=districts,
    )
