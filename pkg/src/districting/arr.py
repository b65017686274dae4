"""Adaptive randomized rounding (ARR).

Each trial perturbs the current seed, rounds it to a connected partition and
scores the result with the two-phase objective. The seed drifts toward the
best plan found so far by exponential smoothing whose rate shrinks as the
seed approaches an integer point; when the same best plan keeps coming back,
the seed is reset to the centroid with growing probability.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .model import Plan, ProblemInstance, Score, conditional_objective, indicator
from .rounding import round_to_plan

Mode = Literal["down", "up"]


@dataclass(frozen=True)
class ArrConfig:
    max_trials: int = 1000
    mode: Mode = "down"
    reset_run_divisor: int = 20
    rng_seed: int = 0
    restarts: int = 1
    # stop a run once its best score reaches this value
    target_score: Score | None = None
    relabel_invariant: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_trials < 1:
            raise ValueError("max_trials must be at least 1")
        if self.reset_run_divisor < 1:
            raise ValueError("reset_run_divisor must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.mode not in ("down", "up"):
            raise ValueError(f"unknown perturbation mode {self.mode!r}")


@dataclass
class ArrState:
    seed: np.ndarray
    best_plan: Plan
    best_score: Score
    n_local: int = 0
    trial_index: int = 0


@dataclass
class TrialTrace:
    trial: list[int] = field(default_factory=list)
    score: list[Score] = field(default_factory=list)
    best_score: list[Score] = field(default_factory=list)
    rmsd: list[float] = field(default_factory=list)
    reset: list[bool] = field(default_factory=list)
    first_feasible_trial: int | None = None

    def record(self, t: int, score: Score, best: Score, r: float, reset: bool) -> None:
        self.trial.append(t)
        self.score.append(score)
        self.best_score.append(best)
        self.rmsd.append(r)
        self.reset.append(reset)

    def __len__(self) -> int:
        return len(self.trial)


@dataclass
class ArrResult:
    plan: Plan
    score: Score
    feasible: bool
    trace: TrialTrace
    restart: int = 0
    traces: list[TrialTrace] = field(default_factory=list)

    @property
    def total_trials(self) -> int:
        return sum(len(t) for t in self.traces)


def perturb(seed: np.ndarray, rng: np.random.Generator, mode: Mode = "down") -> np.ndarray:
    """Draw each entry from U[0, y] ("down") or U[y, 1] ("up")."""
    pi = rng.random(seed.shape)
    if mode == "down":
        return seed * pi
    if mode == "up":
        return seed + (1.0 - seed) * pi
    raise ValueError(f"unknown perturbation mode {mode!r}")


def rmsd(seed: np.ndarray) -> float:
    """Root-mean-square deviation of the seed from the all-0.5 centroid."""
    dev = np.asarray(seed, dtype=float) - 0.5
    if dev.size == 0:
        raise ValueError("empty seed")
    return math.sqrt(float(np.vdot(dev, dev)) / dev.size)


def decelerator(r: float) -> float:
    if not 0.0 <= r <= 0.5:
        raise ValueError(f"rmsd {r} outside [0, 0.5]")
    return 1.0 / (1.0 + math.exp(4.0 * r))


def smooth_seed(prev: np.ndarray, best: np.ndarray, alpha: float) -> np.ndarray:
    """Convex step ``(1 - alpha) * prev + alpha * best``; ``best`` is a 0/1 indicator."""
    if prev.shape != best.shape:
        raise ValueError(f"shape mismatch {prev.shape} vs {best.shape}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha {alpha} outside (0, 1)")
    return (1.0 - alpha) * prev + alpha * best


def reset_probability(n_local: int, seed: np.ndarray | float, divisor: int = 20) -> float:
    """``min(n_local / divisor, 1) * rmsd(seed)``; ``seed`` may be a precomputed rmsd."""
    if n_local < 0:
        raise ValueError("n_local must be nonnegative")
    r = seed if isinstance(seed, float) else rmsd(seed)
    return min(n_local / divisor, 1.0) * r


def canonical_labels(plan: Plan) -> Plan:
    """Relabel districts in order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(d, len(seen)) for d in plan)


def _run_once(inst: ProblemInstance, cfg: ArrConfig, rng: np.random.Generator) -> ArrResult:
    g, k = inst.graph, inst.k
    n = g.node_count
    target = cfg.target_score
    same = (lambda a, b: canonical_labels(a) == canonical_labels(b)) if cfg.relabel_invariant else (
        lambda a, b: a == b
    )
    trace = TrialTrace()
    objective = lru_cache(maxsize=1024)(
        lambda plan: conditional_objective(inst, plan, assume_connected=True)
    )

    centroid = np.full((n, k), 0.5)
    plan = round_to_plan(perturb(centroid, rng, cfg.mode), g, k)
    score = objective(plan)
    state = ArrState(seed=centroid, best_plan=plan, best_score=score)
    best_ind = indicator(plan, k)
    if score < inst.M:
        trace.first_feasible_trial = 0
    trace.record(0, score, score, 0.0, False)
    r = 0.0

    for t in range(1, cfg.max_trials):
        if target is not None and state.best_score <= target:
            break
        state.trial_index = t
        alpha = decelerator(r)
        state.seed = smooth_seed(state.seed, best_ind, alpha)
        plan = round_to_plan(perturb(state.seed, rng, cfg.mode), g, k)
        score = objective(plan)

        if score < state.best_score:
            state.best_plan, state.best_score = plan, score
            best_ind = indicator(plan, k)
            state.n_local = 0
            if trace.first_feasible_trial is None and score < inst.M:
                trace.first_feasible_trial = t
        elif same(plan, state.best_plan):
            state.n_local += 1
        else:
            state.n_local = 0

        r = min(rmsd(state.seed), 0.5)
        trace_r = r
        p_reset = reset_probability(state.n_local, r, cfg.reset_run_divisor)
        reset = p_reset > 0.0 and rng.random() < p_reset
        if reset:
            state.seed = centroid
            state.n_local = 0
            r = 0.0
        trace.record(t, score, state.best_score, trace_r, reset)

    return ArrResult(
        plan=state.best_plan,
        score=state.best_score,
        feasible=state.best_score < inst.M,
        trace=trace,
        traces=[trace],
    )


def _restart_rng(rng_seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([rng_seed, restart])


def _run_restart(args: tuple[ProblemInstance, ArrConfig, int]) -> ArrResult:
    inst, cfg, r = args
    res = _run_once(inst, cfg, _restart_rng(cfg.rng_seed, r))
    res.restart = r
    return res


def run_arr(inst: ProblemInstance, cfg: ArrConfig | None = None) -> ArrResult:
    """Best plan over ``cfg.restarts`` independent ARR runs.

    Restart ``r`` draws from its own stream seeded by ``(rng_seed, r)``, so the
    answer does not depend on ``cfg.workers``. Score ties go to the lower
    restart index.
    """
    cfg = cfg or ArrConfig()
    if inst.k > inst.node_count:
        raise ValueError(f"k exceeds node count ({inst.k} > {inst.node_count})")
    jobs = [(inst, cfg, r) for r in range(cfg.restarts)]
    results: list[ArrResult] = []
    if cfg.workers > 1 and cfg.restarts > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_restart, jobs))
        if cfg.target_score is not None:
            hit = [i for i, res in enumerate(results) if res.score <= cfg.target_score]
            if hit:
                results = results[: hit[0] + 1]
    else:
        for job in jobs:
            res = _run_restart(job)
            results.append(res)
            if cfg.target_score is not None and res.score <= cfg.target_score:
                break
    best = min(results, key=lambda res: (res.score, res.restart))
    best.traces = [res.trace for res in results]
    return best
