"""Hill climbing over problem-defined neighborhoods, first- or best-improving."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .core import ProblemInstance, RandomStream, Solution, evaluate


class SearchDepth(enum.Enum):
    FIRST_IMPROVING = "first"
    BEST_IMPROVING = "best"


@dataclass(frozen=True)
class Move:
    """One neighborhood move with its exact objective delta.

    kinds: "insert" (permutation: element from_pos -> to_pos), "swap"
    (exchange two positions, or a vertex pair across the cut), "transfer"
    (partition: flip element's side).
    """

    kind: str
    element: int
    from_pos: Optional[int] = None
    to_pos: Optional[int] = None
    other: Optional[int] = None  # second element of a partition swap
    delta: int = 0


def enumerate_moves(instance: ProblemInstance, solution: Solution, offset: int = 0):
    """Every move of the instance's configured neighborhood, in scan order."""
    return instance.moves(solution, offset)


def local_search(
    instance: ProblemInstance,
    start: Solution,
    depth: SearchDepth,
    rng: RandomStream,
) -> Solution:
    """Climb from start until no improving move remains; start is not mutated.

    Best-improving applies the maximum-delta move each pass (ties: first in
    scan order) and consumes no rng. First-improving applies the first
    improving move per scan; for problems that declare
    randomized_first_improving a fresh scan offset is drawn each pass so the
    scan is not biased toward low vertex ids.
    """
    sol = start.copy()
    if sol.cached_objective is None:
        evaluate(instance, sol)
    if depth is SearchDepth.BEST_IMPROVING:
        while True:
            best: Optional[Move] = None
            for move in instance.moves(sol):
                if move.delta > 0 and (best is None or move.delta > best.delta):
                    best = move
            if best is None:
                return sol
            instance.apply_move(sol, best)
    while True:
        offset = rng.randrange(instance.n) if instance.randomized_first_improving else 0
        improved = False
        for move in instance.moves(sol, offset):
            if move.delta > 0:
                instance.apply_move(sol, move)
                improved = True
                break
        if not improved:
            return sol
