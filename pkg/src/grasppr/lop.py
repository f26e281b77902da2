"""Linear ordering problem: maximize the sum of matrix entries above the diagonal.

A solution is an ordering of the n vertices; vertex a placed before vertex b
contributes cost[a][b]. The default neighborhood is insert (move one vertex to
another position); a swap neighborhood and swap-based relinking candidates sit
behind the neighborhood flag for comparison runs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import PERMUTATION, PermutationSolution, ProblemInstance, delta as delta_size
from .local_search import Move
from .path_relinking import PrStep

_INT32 = 2**31


class _LopBuilder:
    """Appends one vertex per step; g(v) = objective increase of appending v."""

    def __init__(self, inst: "LopInstance"):
        self.inst = inst
        self.order: list[int] = []
        self.placed = [False] * inst.n
        self.gain = [0] * inst.n  # sum of cost[u][v] over placed u
        self.objective = 0

    @property
    def complete(self) -> bool:
        return len(self.order) == self.inst.n

    def candidates(self) -> list[tuple[int, int]]:
        return [(v, self.gain[v]) for v in range(self.inst.n) if not self.placed[v]]

    def add(self, v: int) -> None:
        if self.placed[v]:
            raise ValueError(f"vertex {v} already placed")
        self.objective += self.gain[v]
        self.order.append(v)
        self.placed[v] = True
        row = self.inst.cost[v]
        for w in range(self.inst.n):
            if not self.placed[w]:
                self.gain[w] += row[w]

    def build(self) -> PermutationSolution:
        return PermutationSolution(self.order, self.objective)


class LopInstance(ProblemInstance):
    representation = PERMUTATION

    def __init__(self, cost: Sequence[Sequence[int]], neighborhood: str = "insert"):
        n = len(cost)
        if n < 2:
            raise ValueError(f"n must be >= 2, got {n}")
        if neighborhood not in ("insert", "swap"):
            raise ValueError(f"unknown neighborhood: {neighborhood!r}")
        rows = []
        for i, row in enumerate(cost):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            for j, w in enumerate(row):
                if not isinstance(w, int) or isinstance(w, bool):
                    raise ValueError(f"non-integer cost at ({i},{j}): {w!r}")
                if not (-_INT32 <= w < _INT32):
                    raise ValueError(f"cost at ({i},{j}) outside 32-bit range: {w}")
            rows.append(tuple(row))
        self.cost = tuple(rows)
        self.n = n
        self.neighborhood = neighborhood

    def evaluate(self, solution: PermutationSolution) -> int:
        order = solution.order
        cost = self.cost
        total = 0
        for i in range(self.n):
            row = cost[order[i]]
            for j in range(i + 1, self.n):
                total += row[order[j]]
        return total

    def append_gain(self, placed: Sequence[int], v: int) -> int:
        """Objective increase of appending v after the placed prefix."""
        return sum(self.cost[u][v] for u in placed)

    def insert_delta(self, order: Sequence[int], elem: int, to_pos: int) -> int:
        """Exact objective change of moving elem to to_pos (O(|i - j|))."""
        return self._insert_delta(order, order.index(elem), to_pos)

    def _insert_delta(self, order: Sequence[int], from_pos: int, to_pos: int) -> int:
        e = order[from_pos]
        cost = self.cost
        d = 0
        if to_pos > from_pos:
            # e jumps after the crossed block
            for p in range(from_pos + 1, to_pos + 1):
                u = order[p]
                d += cost[u][e] - cost[e][u]
        else:
            for p in range(to_pos, from_pos):
                u = order[p]
                d += cost[e][u] - cost[u][e]
        return d

    def _swap_delta(self, order: Sequence[int], i: int, j: int) -> int:
        # exchange positions i < j
        a, b = order[i], order[j]
        cost = self.cost
        d = cost[b][a] - cost[a][b]
        for p in range(i + 1, j):
            u = order[p]
            d += (cost[b][u] - cost[u][b]) + (cost[u][a] - cost[a][u])
        return d

    def new_construction(self) -> _LopBuilder:
        return _LopBuilder(self)

    def moves(self, solution: PermutationSolution, offset: int = 0) -> Iterable[Move]:
        # canonical scan order: element id ascending, target position ascending;
        # the permutation scan ignores offsets (first-improving stays canonical)
        order = solution.order
        pos = [0] * self.n
        for p, v in enumerate(order):
            pos[v] = p
        if self.neighborhood == "insert":
            for e in range(self.n):
                i = pos[e]
                for j in range(self.n):
                    if j != i:
                        yield Move("insert", e, i, j, delta=self._insert_delta(order, i, j))
        else:
            for i in range(self.n - 1):
                for j in range(i + 1, self.n):
                    yield Move("swap", order[i], i, j, other=order[j], delta=self._swap_delta(order, i, j))

    def apply_move(self, solution: PermutationSolution, move: Move) -> None:
        order = solution.order
        if move.kind == "insert":
            e = order.pop(move.from_pos)
            order.insert(move.to_pos, e)
        elif move.kind == "swap":
            i, j = move.from_pos, move.to_pos
            order[i], order[j] = order[j], order[i]
        else:
            raise ValueError(f"not a permutation move: {move.kind}")
        if solution.cached_objective is not None:
            solution.cached_objective += move.delta

    def pr_candidates(self, current: PermutationSolution, guiding: PermutationSolution) -> list[PrStep]:
        """Insertions (or swaps, per the neighborhood flag) of misplaced elements
        into their guiding position, kept only when they strictly reduce the
        position-wise difference to the guiding solution."""
        if current == guiding:
            raise ValueError("current and guiding coincide")
        cur, tgt = current.order, guiding.order
        pos_cur = [0] * self.n
        pos_tgt = [0] * self.n
        for p in range(self.n):
            pos_cur[cur[p]] = p
            pos_tgt[tgt[p]] = p
        base = sum(1 for p in range(self.n) if cur[p] != tgt[p])
        steps: list[PrStep] = []
        for e in range(self.n):
            i, j = pos_cur[e], pos_tgt[e]
            if i == j:
                continue
            if self.neighborhood == "insert":
                scratch = list(cur)
                scratch.pop(i)
                scratch.insert(j, e)
                move = Move("insert", e, i, j, delta=self._insert_delta(cur, i, j))
            else:
                scratch = list(cur)
                scratch[i], scratch[j] = scratch[j], scratch[i]
                lo, hi = min(i, j), max(i, j)
                move = Move("swap", cur[lo], lo, hi, other=cur[hi], delta=self._swap_delta(cur, lo, hi))
            new_size = sum(1 for p in range(self.n) if scratch[p] != tgt[p])
            if new_size < base:
                steps.append(PrStep(move, move.delta, reaches_guiding=(new_size == 0)))
        return steps

    def absent_attributes(self, current: PermutationSolution, guide: PermutationSolution) -> list[tuple[int, int]]:
        # attribute = (element, position it occupies in the guide)
        pos_cur = {v: p for p, v in enumerate(current.order)}
        return [(v, p) for p, v in enumerate(guide.order) if pos_cur[v] != p]

    def attribute_move(self, current: PermutationSolution, attribute: tuple[int, int]) -> tuple[Move, int]:
        e, j = attribute
        i = current.order.index(e)
        if i == j:
            raise ValueError(f"attribute {attribute} already present")
        d = self._insert_delta(current.order, i, j)
        return Move("insert", e, i, j, delta=d), d
