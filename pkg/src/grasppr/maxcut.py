"""Max-cut: maximize total weight of edges crossing a two-sided vertex partition.

Weights may be negative. The default neighborhood transfers one vertex across
the cut; flip gains are kept in a GainTable so a transfer costs O(degree).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import PARTITION, PartitionSolution, ProblemInstance
from .local_search import Move
from .path_relinking import PrStep

_INT32 = 2**31


class GainTable:
    """gain[v] = cut change if v switched sides, kept exact across flips."""

    def __init__(self, inst: "MaxCutInstance", solution: PartitionSolution):
        self.inst = inst
        self.solution = solution
        bits = solution.bits
        self.gain = [0] * inst.n
        for v in range(inst.n):
            g = 0
            for u, w in inst.adj[v]:
                g += w if bits[u] == bits[v] else -w
            self.gain[v] = g

    def apply_flip(self, v: int) -> int:
        """Flip v in place; returns the objective delta. O(degree(v))."""
        d = self.gain[v]
        bits = self.solution.bits
        old_side = bits[v]
        bits[v] ^= 1
        if self.solution.cached_objective is not None:
            self.solution.cached_objective += d
        self.gain[v] = -d
        for u, w in self.inst.adj[v]:
            # neighbors previously on v's side lose 2w of gain, others regain it
            if bits[u] == old_side:
                self.gain[u] -= 2 * w
            else:
                self.gain[u] += 2 * w
        return d


class _MaxCutBuilder:
    """Assigns one (vertex, side) per step; the seed vertex is forced to side 1.

    g((v, side)) = weight toward already-assigned vertices on the other side,
    i.e. the exact cut increase of the assignment.
    """

    def __init__(self, inst: "MaxCutInstance"):
        self.inst = inst
        self.assigned: list[int | None] = [None] * inst.n
        # gain_to[side][v]: cut increase if v joins `side`
        self.gain_to = [[0] * inst.n, [0] * inst.n]
        self.objective = 0
        self.count = 0
        if inst.n > 0:
            seed = max(range(inst.n), key=lambda v: (sum(w for _, w in inst.adj[v]), -v))
            self.add((seed, 1))

    @property
    def complete(self) -> bool:
        return self.count == self.inst.n

    def candidates(self) -> list[tuple[tuple[int, int], int]]:
        out = []
        for v in range(self.inst.n):
            if self.assigned[v] is None:
                out.append(((v, 0), self.gain_to[0][v]))
                out.append(((v, 1), self.gain_to[1][v]))
        return out

    def add(self, key: tuple[int, int]) -> None:
        v, side = key
        if self.assigned[v] is not None:
            raise ValueError(f"vertex {v} already assigned")
        self.objective += self.gain_to[side][v]
        self.assigned[v] = side
        self.count += 1
        for u, w in self.inst.adj[v]:
            if self.assigned[u] is None:
                self.gain_to[1 - side][u] += w

    def build(self) -> PartitionSolution:
        return PartitionSolution([s if s is not None else 0 for s in self.assigned], self.objective)


class MaxCutInstance(ProblemInstance):
    representation = PARTITION
    randomized_first_improving = True  # per-pass scan offset, see local_search

    def __init__(self, n: int, edges: Sequence[tuple[int, int, int]], neighborhood: str = "transfer"):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if neighborhood not in ("transfer", "swap"):
            raise ValueError(f"unknown neighborhood: {neighborhood!r}")
        merged: dict[tuple[int, int], int] = {}
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"vertex out of range in edge ({i},{j})")
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not isinstance(w, int) or isinstance(w, bool):
                raise ValueError(f"non-integer weight on edge ({i},{j}): {w!r}")
            key = (i, j) if i < j else (j, i)
            merged[key] = merged.get(key, 0) + w
        for (i, j), w in merged.items():
            if not (-_INT32 <= w < _INT32):
                raise ValueError(f"merged weight on edge ({i},{j}) outside 32-bit range: {w}")
        self.n = n
        self.edges = tuple(sorted((i, j, w) for (i, j), w in merged.items()))
        self.neighborhood = neighborhood
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, j, w in self.edges:
            adj[i].append((j, w))
            adj[j].append((i, w))
        self.adj = tuple(tuple(a) for a in adj)
        self._weight = {(i, j): w for i, j, w in self.edges}

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_weight(self, u: int, v: int) -> int:
        return self._weight.get((u, v) if u < v else (v, u), 0)

    def evaluate(self, solution: PartitionSolution) -> int:
        bits = solution.bits
        return sum(w for i, j, w in self.edges if bits[i] != bits[j])

    def flip_delta(self, solution: PartitionSolution, gains: GainTable, v: int) -> int:
        return gains.gain[v]

    def _gain_of(self, solution: PartitionSolution, v: int) -> int:
        bits = solution.bits
        return sum(w if bits[u] == bits[v] else -w for u, w in self.adj[v])

    def new_construction(self) -> _MaxCutBuilder:
        return _MaxCutBuilder(self)

    def moves(self, solution: PartitionSolution, offset: int = 0) -> Iterable[Move]:
        gains = GainTable(self, solution).gain
        if self.neighborhood == "transfer":
            for k in range(self.n):
                v = (offset + k) % self.n
                yield Move("transfer", v, delta=gains[v])
        else:
            bits = solution.bits
            for u in range(self.n):
                if bits[u] != 1:
                    continue
                for v in range(self.n):
                    if bits[v] == 0:
                        d = gains[u] + gains[v] + 2 * self.edge_weight(u, v)
                        yield Move("swap", u, other=v, delta=d)

    def apply_move(self, solution: PartitionSolution, move: Move) -> None:
        if move.kind == "transfer":
            solution.bits[move.element] ^= 1
        elif move.kind == "swap":
            solution.bits[move.element] ^= 1
            solution.bits[move.other] ^= 1
        else:
            raise ValueError(f"not a partition move: {move.kind}")
        if solution.cached_objective is not None:
            solution.cached_objective += move.delta

    def pr_candidates(self, current: PartitionSolution, guiding: PartitionSolution) -> list[PrStep]:
        if current == guiding:
            raise ValueError("current and guiding coincide")
        # every flip of a differing position reduces the difference by exactly 1
        gains = GainTable(self, current).gain
        diff = [j for j in range(self.n) if current.bits[j] != guiding.bits[j]]
        reaches = len(diff) == 1
        return [PrStep(Move("transfer", j, delta=gains[j]), gains[j], reaches_guiding=reaches) for j in diff]

    def absent_attributes(self, current: PartitionSolution, guide: PartitionSolution) -> list[tuple[int, int]]:
        # attribute = (position, side bit in the guide)
        return [(j, guide.bits[j]) for j in range(self.n) if current.bits[j] != guide.bits[j]]

    def attribute_move(self, current: PartitionSolution, attribute: tuple[int, int]) -> tuple[Move, int]:
        j, bit = attribute
        if current.bits[j] == bit:
            raise ValueError(f"attribute {attribute} already present")
        d = self._gain_of(current, j)
        return Move("transfer", j, delta=d), d
