"""Bounded pool of high-quality, mutually diverse solutions for relinking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Optional

from .core import (
    PartitionSolution,
    PermutationSolution,
    RandomStream,
    Solution,
    delta as delta_size,
)

UNIFORM = "uniform"
PROPORTIONAL_DELTA = "pdelta"


@dataclass
class AddResult:
    added: bool
    evicted: list[Solution] = field(default_factory=list)
    reason: Optional[str] = None  # quality | duplicate | diversity when rejected


@dataclass
class _Member:
    uid: int
    solution: Solution
    objective: int


class EliteSet:
    """Admission follows two phases.

    Fill-up (below capacity): a candidate enters iff it is at least
    diversity_threshold away from every member; a candidate failing that but
    strictly better than every member closer than the threshold replaces all
    of them (keeping the fill-up pairwise diversity invariant). The first
    solution is always admitted.

    Full: better than the best member always enters; better than the worst
    enters if not identical to any member. Admission evicts the closest
    strictly-worse member (ties: lower objective, then lowest index).
    """

    def __init__(self, capacity: int = 10, diversity_threshold: int = 1):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if diversity_threshold < 1:
            raise ValueError("diversity_threshold must be >= 1")
        self.capacity = capacity
        self.diversity_threshold = diversity_threshold
        self._members: list[_Member] = []
        self._next_uid = 0
        self._relinked: set[frozenset[int]] = set()

    def __len__(self) -> int:
        return len(self._members)

    @property
    def full(self) -> bool:
        return len(self._members) >= self.capacity

    @property
    def members(self) -> list[tuple[Solution, int]]:
        """(solution, objective) pairs in index order; treat as read-only."""
        return [(m.solution, m.objective) for m in self._members]

    def best_objective(self) -> int:
        return max(m.objective for m in self._members)

    def worst_objective(self) -> int:
        return min(m.objective for m in self._members)

    def clear(self) -> None:
        self._members.clear()
        self._relinked.clear()

    def _admit(self, solution: Solution, objective: int) -> _Member:
        member = _Member(self._next_uid, solution.copy(), objective)
        member.solution.cached_objective = objective
        self._next_uid += 1
        self._members.append(member)
        return member

    def _drop(self, member: _Member) -> None:
        self._members.remove(member)
        self._relinked = {pair for pair in self._relinked if member.uid not in pair}

    def try_add(self, solution: Solution, objective: Optional[int] = None) -> AddResult:
        if objective is None:
            objective = solution.cached_objective
        if objective is None:
            raise ValueError("candidate has no objective")

        if not self.full:
            near = [m for m in self._members if delta_size(solution, m.solution) < self.diversity_threshold]
            if not near:
                self._admit(solution, objective)
                return AddResult(True)
            if all(objective > m.objective for m in near):
                for m in near:
                    self._drop(m)
                self._admit(solution, objective)
                return AddResult(True, evicted=[m.solution for m in near])
            return AddResult(False, reason="diversity")

        best = self.best_objective()
        worst = self.worst_objective()
        if objective <= worst:
            return AddResult(False, reason="quality")
        if objective <= best and any(delta_size(solution, m.solution) == 0 for m in self._members):
            return AddResult(False, reason="duplicate")

        # evict the closest member among those strictly worse than the candidate
        worse = [(i, m) for i, m in enumerate(self._members) if m.objective < objective]
        _, victim = min(worse, key=lambda im: (delta_size(im[1].solution, solution), im[1].objective, im[0]))
        self._drop(victim)
        self._admit(solution, objective)
        return AddResult(True, evicted=[victim.solution])

    def select_guide(self, reference: Solution, policy: str, rng: RandomStream) -> Optional[Solution]:
        """Pick a relinking guide for reference; None when no usable candidate.

        uniform ignores distances; pdelta draws proportionally to the symmetric
        difference, so identical members are never selected and an all-identical
        set yields None.
        """
        if not self._members:
            raise ValueError("elite set is empty")
        if policy == UNIFORM:
            if len(self._members) == 1:
                return self._members[0].solution
            return rng.pick([m.solution for m in self._members])
        if policy != PROPORTIONAL_DELTA:
            raise ValueError(f"unknown guide policy: {policy!r}")
        deltas = [delta_size(m.solution, reference) for m in self._members]
        if not any(deltas):
            return None
        if len(self._members) == 1:
            return self._members[0].solution
        return self._members[rng.weighted_index(deltas)].solution

    def next_unrelinked_pair(self) -> Optional[tuple[Solution, Solution]]:
        """First member pair (lowest index order) not yet relinked; marks it."""
        for i in range(len(self._members)):
            for j in range(i + 1, len(self._members)):
                key = frozenset((self._members[i].uid, self._members[j].uid))
                if key not in self._relinked:
                    self._relinked.add(key)
                    return self._members[i].solution, self._members[j].solution
        return None

    def dump(self, sink: IO[str]) -> None:
        """One solution per line: space-separated order, or a 0/1 membership string."""
        for m in self._members:
            if isinstance(m.solution, PermutationSolution):
                sink.write(" ".join(map(str, m.solution.order)) + "\n")
            elif isinstance(m.solution, PartitionSolution):
                sink.write("".join(map(str, m.solution.bits)) + "\n")
            else:
                raise TypeError(f"cannot dump {type(m.solution).__name__}")
