"""Path relinking: interior walks in four directions, truncation, a minimum
distance guard, exterior (diversifying) walks, and multi-parent relinking.

Interior steps are restricted to moves that strictly reduce the symmetric
difference to the guiding solution and the guiding solution itself is never
re-visited. For partitions every flip of a differing position qualifies; for
permutations the insertion of a misplaced element into its guiding position
is filtered by that rule, so a walk can stop early when only non-reducing
insertions remain (e.g. the two endpoints differ by a non-adjacent
transposition).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    PARTITION,
    ProblemInstance,
    RandomStream,
    Solution,
    delta as delta_size,
    evaluate,
)

FORWARD = "forward"
BACKWARD = "backward"
BACK_AND_FORWARD = "back_and_forward"
MIXED = "mixed"
_DIRECTIONS = (FORWARD, BACKWARD, BACK_AND_FORWARD, MIXED)

GREEDY = "greedy"
GREEDY_RANDOMIZED = "grpr"

LS_NONE = "none"
LS_ALL = "all"
LS_EVERY = "every"
LS_BEST = "best"


@dataclass(frozen=True)
class PrStep:
    """A candidate relinking move produced by a problem adapter."""

    move: object
    delta: int
    reaches_guiding: bool


@dataclass
class PrConfig:
    direction: str = FORWARD
    step: str = GREEDY
    rcl_size: int = 3  # candidate moves kept per step under grpr selection
    truncation: float = 1.0  # fraction rho of the full path walked, per directional segment
    min_distance: int = 4  # below this symmetric difference relinking is skipped
    in_path_ls: str = LS_NONE
    ls_every: int = 5
    exterior_steps: int = 0  # nonzero runs the exterior walk instead of an interior one

    def __post_init__(self):
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"unknown direction: {self.direction!r}")
        if self.step not in (GREEDY, GREEDY_RANDOMIZED):
            raise ValueError(f"unknown step selection: {self.step!r}")
        if self.rcl_size < 1:
            raise ValueError("rcl_size must be >= 1")
        if not (0.0 < self.truncation <= 1.0):
            raise ValueError("truncation must be in (0, 1]")
        if self.min_distance < 0:
            raise ValueError("min_distance must be >= 0")
        if self.in_path_ls not in (LS_NONE, LS_ALL, LS_EVERY, LS_BEST):
            raise ValueError(f"unknown in-path local search policy: {self.in_path_ls!r}")
        if self.ls_every < 1:
            raise ValueError("ls_every must be >= 1")
        if self.exterior_steps < 0:
            raise ValueError("exterior_steps must be >= 0")


@dataclass
class PathTrace:
    """Solutions visited between (never including) the endpoints.

    best_index points at the first visited solution attaining the maximum
    objective, or None for an empty trace. guiding is None for multi-parent
    traces, which have several guides.
    """

    initiating: Solution
    guiding: Optional[Solution]
    visited: list[tuple[Solution, int]] = field(default_factory=list)
    best_index: Optional[int] = None


def _ensure_objective(instance: ProblemInstance, sol: Solution) -> int:
    if sol.cached_objective is None:
        evaluate(instance, sol)
    return sol.cached_objective


class _BestTracker:
    def __init__(self):
        self.solution: Optional[Solution] = None
        self.objective: Optional[int] = None

    def offer(self, sol: Solution, obj: int) -> None:
        if self.objective is None or obj > self.objective:
            self.solution = sol.copy()
            self.objective = obj


def _select_step(cands: list[PrStep], cfg: PrConfig, rng: RandomStream) -> PrStep:
    # adapters yield candidates in ascending element order, so keeping the
    # first maximum gives the lowest-id tie-break in both branches
    if cfg.step == GREEDY:
        best = cands[0]
        for c in cands[1:]:
            if c.delta > best.delta:
                best = c
        return best
    ranked = sorted(cands, key=lambda c: -c.delta)  # stable: id order within equal deltas
    return rng.pick(ranked[: cfg.rcl_size])


def _walk(
    instance: ProblemInstance,
    start: Solution,
    guide: Solution,
    budget: int,
    cfg: PrConfig,
    rng: RandomStream,
    visit: Callable[[Solution], None],
) -> None:
    current = start.copy()
    steps = 0
    while steps < budget:
        cands = [c for c in instance.pr_candidates(current, guide) if not c.reaches_guiding]
        if not cands:
            return
        chosen = _select_step(cands, cfg, rng)
        instance.apply_move(current, chosen.move)
        steps += 1
        visit(current)


def _walk_mixed(
    instance: ProblemInstance,
    worse: Solution,
    better: Solution,
    budget: int,
    cfg: PrConfig,
    rng: RandomStream,
    visit: Callable[[Solution], None],
) -> None:
    # roles reverse after every accepted step; each head gets `budget` steps
    heads = [worse.copy(), better.copy()]
    steps = [0, 0]
    mover = 0
    while steps[mover] < budget:
        cands = [
            c
            for c in instance.pr_candidates(heads[mover], heads[1 - mover])
            if not c.reaches_guiding
        ]
        if not cands:
            return
        chosen = _select_step(cands, cfg, rng)
        instance.apply_move(heads[mover], chosen.move)
        steps[mover] += 1
        visit(heads[mover])
        mover = 1 - mover


def relink(
    instance: ProblemInstance,
    s: Solution,
    t: Solution,
    cfg: PrConfig,
    rng: RandomStream,
    ls: Optional[Callable[[Solution], Solution]] = None,
) -> tuple[Solution, PathTrace]:
    """Relink s and t; returns (best solution found, trace of visited solutions).

    Roles are resolved by objective: forward initiates from the worse endpoint,
    backward from the better one, back_and_forward concatenates a backward and
    a forward pass, mixed alternates heads. The returned best is the maximum
    over the better endpoint, the visited solutions, and any in-path local
    search outputs (the trace always records the raw, unimproved path).
    """
    if type(s) is not type(t):
        raise TypeError("mismatched representations")
    if s == t:
        raise ValueError("relink endpoints must differ")
    if cfg.exterior_steps > 0:
        return exterior_relink(instance, s, t, cfg.exterior_steps, rng)

    fs = _ensure_objective(instance, s)
    ft = _ensure_objective(instance, t)
    better, worse = (s, t) if fs >= ft else (t, s)

    if cfg.direction == BACKWARD or cfg.direction == BACK_AND_FORWARD:
        initiating, guiding = better, worse
    else:
        initiating, guiding = worse, better

    best = _BestTracker()
    best.offer(better, better.cached_objective)
    trace = PathTrace(initiating=initiating, guiding=guiding)

    dsize = delta_size(s, t)
    if dsize < cfg.min_distance:
        return best.solution, trace

    if ls is None and cfg.in_path_ls != LS_NONE:
        from .local_search import SearchDepth, local_search

        ls = lambda sol: local_search(instance, sol, SearchDepth.BEST_IMPROVING, rng)

    def visit(sol: Solution) -> None:
        obj = sol.cached_objective
        trace.visited.append((sol.copy(), obj))
        best.offer(sol, obj)
        if cfg.in_path_ls == LS_ALL or (
            cfg.in_path_ls == LS_EVERY and len(trace.visited) % cfg.ls_every == 0
        ):
            improved = ls(sol)
            best.offer(improved, improved.cached_objective)

    budget = math.ceil(cfg.truncation * (dsize - 1))
    if cfg.direction == FORWARD:
        _walk(instance, worse, better, budget, cfg, rng, visit)
    elif cfg.direction == BACKWARD:
        _walk(instance, better, worse, budget, cfg, rng, visit)
    elif cfg.direction == BACK_AND_FORWARD:
        _walk(instance, better, worse, budget, cfg, rng, visit)
        _walk(instance, worse, better, budget, cfg, rng, visit)
    else:
        _walk_mixed(instance, worse, better, budget, cfg, rng, visit)

    if trace.visited:
        objs = [obj for _, obj in trace.visited]
        trace.best_index = objs.index(max(objs))
        if cfg.in_path_ls == LS_BEST:
            improved = ls(trace.visited[trace.best_index][0])
            best.offer(improved, improved.cached_objective)
    return best.solution, trace


def exterior_relink(
    instance: ProblemInstance,
    s: Solution,
    t: Solution,
    steps: int,
    rng: RandomStream,
) -> tuple[Solution, PathTrace]:
    """Walk away from both endpoints by flipping positions they share.

    Partition representations only. Every step strictly increases the
    symmetric difference to both s and t; stops after `steps` flips or when no
    shared position remains.
    """
    if instance.representation != PARTITION:
        raise ValueError("exterior relinking is defined for partition representations only")
    if s == t:
        raise ValueError("relink endpoints must differ")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    fs = _ensure_objective(instance, s)
    ft = _ensure_objective(instance, t)
    best = _BestTracker()
    best.offer(s if fs >= ft else t, max(fs, ft))
    trace = PathTrace(initiating=s, guiding=t)

    current = s.copy()
    for _ in range(steps):
        shared = [
            j
            for j in range(instance.n)
            if s.bits[j] == t.bits[j] == current.bits[j]
        ]
        if not shared:
            break
        scored = [(instance.attribute_move(current, (j, 1 - current.bits[j]))[0], j) for j in shared]
        chosen = scored[0][0]
        for move, _ in scored[1:]:
            if move.delta > chosen.delta:
                chosen = move
        instance.apply_move(current, chosen)
        trace.visited.append((current.copy(), current.cached_objective))
        best.offer(current, current.cached_objective)
    if trace.visited:
        objs = [obj for _, obj in trace.visited]
        trace.best_index = objs.index(max(objs))
    return best.solution, trace


def multi_parent_relink(
    instance: ProblemInstance,
    s: Solution,
    guides: list[Solution],
    max_steps: int,
    rng: RandomStream,
) -> tuple[Solution, PathTrace]:
    """Relink s toward a set of guides at once.

    Step candidates are the guide attributes absent from the current solution,
    weighted by how many guides carry them; the step incorporates a
    maximum-frequency attribute, preferring the best objective delta and
    breaking exact ties uniformly. Stops after max_steps incorporations or
    when the candidate set empties.
    """
    if not guides:
        raise ValueError("guides must be non-empty")
    if any(type(g) is not type(s) for g in guides):
        raise TypeError("mismatched representations")
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    # a guide identical to s contributes no absent attributes; all-identical
    # guide sets therefore terminate immediately with an empty trace
    fs = _ensure_objective(instance, s)
    for g in guides:
        _ensure_objective(instance, g)
    best = _BestTracker()
    best.offer(s, fs)
    trace = PathTrace(initiating=s, guiding=None)

    current = s.copy()
    for _ in range(max_steps):
        counts: dict[tuple, int] = {}
        for g in guides:
            for attr in instance.absent_attributes(current, g):
                counts[attr] = counts.get(attr, 0) + 1
        if not counts:
            break
        fmax = max(counts.values())
        pool = sorted(attr for attr, c in counts.items() if c == fmax)
        scored = [instance.attribute_move(current, attr) for attr in pool]
        dmax = max(d for _, d in scored)
        ties = [move for move, d in scored if d == dmax]
        chosen = rng.pick(ties)
        instance.apply_move(current, chosen)
        trace.visited.append((current.copy(), current.cached_objective))
        best.offer(current, current.cached_objective)
    if trace.visited:
        objs = [obj for _, obj in trace.visited]
        trace.best_index = objs.index(max(objs))
    return best.solution, trace
