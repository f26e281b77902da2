"""Problem-agnostic building blocks: solutions, the problem interface, seeded RNG.

Objectives are exact Python ints throughout (maximization); no floats enter the
solver core. Instances validate that individual weights fit 32-bit so that any
objective sum fits comfortably in 64 bits.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Objective = int

PERMUTATION = "permutation"
PARTITION = "partition"


@dataclass(eq=False)
class PermutationSolution:
    """An ordering of vertices 0..n-1; order[i] is the vertex at position i."""

    order: list[int]
    cached_objective: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.order)

    def copy(self) -> "PermutationSolution":
        return PermutationSolution(list(self.order), self.cached_objective)

    def __eq__(self, other: object) -> bool:
        # cached_objective is derived state, not identity
        return isinstance(other, PermutationSolution) and self.order == other.order

    def __repr__(self) -> str:
        return f"PermutationSolution({self.order}, f={self.cached_objective})"


@dataclass(eq=False)
class PartitionSolution:
    """A two-sided vertex partition; bits[v] == 1 means v is on side S."""

    bits: list[int]
    cached_objective: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.bits)

    def copy(self) -> "PartitionSolution":
        return PartitionSolution(list(self.bits), self.cached_objective)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PartitionSolution) and self.bits == other.bits

    def __repr__(self) -> str:
        return f"PartitionSolution({''.join(map(str, self.bits))}, f={self.cached_objective})"


Solution = PermutationSolution | PartitionSolution


def _payload(solution: Solution) -> list[int]:
    if isinstance(solution, PermutationSolution):
        return solution.order
    if isinstance(solution, PartitionSolution):
        return solution.bits
    raise TypeError(f"not a solution: {solution!r}")


def symmetric_difference(a: Solution, b: Solution) -> tuple[set[int], int]:
    """Positions where a and b disagree, plus the count.

    For permutations this is the position-wise difference {j : a.order[j] != b.order[j]};
    for partitions {j : a.bits[j] != b.bits[j]}.
    """
    if type(a) is not type(b):
        raise TypeError(f"mixed representations: {type(a).__name__} vs {type(b).__name__}")
    pa, pb = _payload(a), _payload(b)
    if len(pa) != len(pb):
        raise ValueError(f"dimension mismatch: {len(pa)} vs {len(pb)}")
    positions = {j for j, (x, y) in enumerate(zip(pa, pb)) if x != y}
    return positions, len(positions)


def delta(a: Solution, b: Solution) -> int:
    """|symmetric_difference(a, b)| without materializing the position set."""
    pa, pb = _payload(a), _payload(b)
    if len(pa) != len(pb):
        raise ValueError(f"dimension mismatch: {len(pa)} vs {len(pb)}")
    return sum(1 for x, y in zip(pa, pb) if x != y)


class ProblemInstance(ABC):
    """Immutable problem data plus the hooks the generic search modules drive.

    Concrete adapters provide construction, move enumeration, path-relinking
    candidates and the attribute view used by multi-parent relinking.
    """

    representation: str  # PERMUTATION or PARTITION
    n: int

    # first-improving passes draw a random scan offset only when this is set
    randomized_first_improving = False

    @abstractmethod
    def evaluate(self, solution: Solution) -> int:
        """Exact objective of a complete solution."""

    @abstractmethod
    def new_construction(self):
        """Fresh construction builder: candidates() / add(key) / complete / build()."""

    @abstractmethod
    def moves(self, solution: Solution, offset: int = 0):
        """Neighborhood moves in canonical scan order, rotated by offset where supported."""

    @abstractmethod
    def apply_move(self, solution: Solution, move) -> None:
        """Apply a move in place, keeping cached_objective consistent."""

    @abstractmethod
    def pr_candidates(self, current: Solution, guiding: Solution):
        """Path-relinking step candidates toward guiding (see path_relinking.PrStep)."""

    @abstractmethod
    def absent_attributes(self, current: Solution, guide: Solution) -> Iterable[tuple]:
        """Attributes of guide that current lacks (multi-parent relinking)."""

    @abstractmethod
    def attribute_move(self, current: Solution, attribute: tuple):
        """(move, delta) incorporating one absent attribute into current."""

    def check_dimensions(self, solution: Solution) -> None:
        if len(_payload(solution)) != self.n:
            raise ValueError(
                f"dimension mismatch: solution has {len(_payload(solution))} entries, instance has n={self.n}"
            )


def evaluate(instance: ProblemInstance, solution: Solution) -> int:
    """Evaluate and cache the exact objective."""
    instance.check_dimensions(solution)
    value = instance.evaluate(solution)
    solution.cached_objective = value
    return value


_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    # splitmix64 finalizer; used only to derive generator seeds, never as the stream
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


class RandomStream:
    """Seeded, reproducible random stream with explicit substreams.

    The core generator is CPython's Mersenne Twister, which is stable across
    platforms and versions for a fixed integer seed. Substream k reseeds with
    splitmix64(seed + k * golden), matching splitmix64's own stream stepping,
    so a restart gets an unrelated but fully reproducible sequence.
    """

    def __init__(self, seed: int, substream: int = 0):
        self.seed = seed & _MASK64
        self.substream = substream
        self._rng = random.Random(_splitmix64((self.seed + substream * 0x9E3779B97F4A7C15) & _MASK64))

    def advance_substream(self) -> None:
        """Jump to the next substream (used by the restart strategy)."""
        self.substream += 1
        self._rng.seed(_splitmix64((self.seed + self.substream * 0x9E3779B97F4A7C15) & _MASK64))

    def random(self) -> float:
        return self._rng.random()

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def pick(self, seq: Sequence):
        """Uniform choice; a singleton is returned without consuming a draw.

        The no-draw singleton rule is what makes alpha=0 construction a pure
        function of the instance and rcl_size=1 step selection bit-identical
        to greedy: downstream draws stay aligned.
        """
        if not seq:
            raise IndexError("pick from empty sequence")
        if len(seq) == 1:
            return seq[0]
        return seq[self._rng.randrange(len(seq))]

    def alpha_in(self, low: float, high: float) -> float:
        """Uniform draw from the half-open interval (low, high]; collapsed range draws nothing."""
        if low == high:
            return low
        return high - self._rng.random() * (high - low)

    def weighted_index(self, weights: Sequence[int]) -> int:
        """Index drawn with probability weights[i] / sum(weights); requires a positive total."""
        total = sum(weights)
        if total <= 0:
            raise ValueError("weighted_index needs a positive weight total")
        r = self._rng.random() * total
        acc = 0
        for i, w in enumerate(weights):
            acc += w
            if r < acc:
                return i
        return len(weights) - 1  # guard against float edge at r == total
