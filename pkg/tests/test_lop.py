import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasppr.core import PermutationSolution, evaluate
from grasppr.lop import LopInstance

import oracles


def test_objective_examples():
    inst = LopInstance([[0, 5], [3, 0]])
    assert inst.evaluate(PermutationSolution([0, 1])) == 5
    assert inst.evaluate(PermutationSolution([1, 0])) == 3
    zero = LopInstance([[0] * 4 for _ in range(4)])
    assert zero.evaluate(PermutationSolution([2, 0, 3, 1])) == 0


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_objective_plus_reverse_is_offdiagonal_total(seed):
    r = oracles.make_rng(seed)
    cost = oracles.rand_lop_matrix(r, 6, -20, 20)
    inst = LopInstance(cost)
    order = oracles.rand_perm(r, 6)
    total = sum(cost[i][j] for i in range(6) for j in range(6) if i != j)
    assert inst.evaluate(PermutationSolution(order)) + inst.evaluate(
        PermutationSolution(list(reversed(order)))
    ) == total


def test_append_gain():
    inst = LopInstance([[0, 5], [3, 0]])
    assert inst.append_gain([], 0) == 0
    assert inst.append_gain([], 1) == 0
    assert inst.append_gain([0], 1) == 5
    assert inst.append_gain([1], 0) == 3


def test_append_gain_matches_reevaluation():
    r = oracles.make_rng(21)
    cost = oracles.rand_lop_matrix(r, 7)
    inst = LopInstance(cost)
    for _ in range(200):
        order = oracles.rand_perm(r, 7)
        cut = r.randrange(1, 7)
        prefix, v = order[:cut], order[cut]
        assert inst.append_gain(prefix, v) == (
            oracles.lop_value(cost, prefix + [v]) - oracles.lop_value(cost, prefix)
        )


def test_builder_rejects_replacement():
    inst = LopInstance([[0, 1], [1, 0]])
    b = inst.new_construction()
    b.add(0)
    with pytest.raises(ValueError):
        b.add(0)


def test_insert_delta_2x2_example():
    inst = LopInstance([[0, 5], [3, 0]])
    assert inst.insert_delta([0, 1], 0, 1) == -2  # 3 - 5, one reversed pair
    assert inst.insert_delta([0, 1], 0, 0) == 0  # null move


def test_insert_delta_exactness_fuzz():
    r = oracles.make_rng(22)
    cost = oracles.rand_lop_matrix(r, 8, -50, 99)
    inst = LopInstance(cost)
    for _ in range(1000):
        order = oracles.rand_perm(r, 8)
        elem = r.randrange(8)
        to_pos = r.randrange(8)
        d = inst.insert_delta(order, elem, to_pos)
        after = list(order)
        after.remove(elem)
        after.insert(to_pos, elem)
        assert d == oracles.lop_value(cost, after) - oracles.lop_value(cost, order)


def test_swap_delta_exactness_fuzz():
    r = oracles.make_rng(23)
    cost = oracles.rand_lop_matrix(r, 8, -50, 99)
    inst = LopInstance(cost, neighborhood="swap")
    for _ in range(500):
        order = oracles.rand_perm(r, 8)
        i = r.randrange(7)
        j = r.randrange(i + 1, 8)
        d = inst._swap_delta(order, i, j)
        after = list(order)
        after[i], after[j] = after[j], after[i]
        assert d == oracles.lop_value(cost, after) - oracles.lop_value(cost, order)


def test_pr_candidates_worked_example():
    # (1,2,3,4) vs (3,4,2,1) 1-based: every element misplaced, all four
    # insertions strictly shrink the position-wise difference
    inst = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(24), 4))
    cur = PermutationSolution([0, 1, 2, 3])
    tgt = PermutationSolution([2, 3, 1, 0])
    steps = inst.pr_candidates(cur, tgt)
    assert len(steps) == 4
    assert sorted(s.move.element for s in steps) == [0, 1, 2, 3]
    assert not any(s.reaches_guiding for s in steps)


def test_pr_candidates_adjacent_transposition():
    inst = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(25), 4))
    cur = PermutationSolution([0, 2, 1, 3])
    tgt = PermutationSolution([0, 1, 2, 3])
    steps = inst.pr_candidates(cur, tgt)
    # either element's insertion repairs both positions at once
    assert len(steps) == 2
    assert all(s.reaches_guiding for s in steps)


def test_pr_candidates_trap_pairs_yield_nothing():
    # non-adjacent transpositions: no insertion reduces the position-wise
    # difference, so the strictly-reducing filter leaves nothing
    inst3 = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(26), 3))
    assert inst3.pr_candidates(PermutationSolution([2, 1, 0]), PermutationSolution([0, 1, 2])) == []
    inst6 = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(27), 6))
    assert inst6.pr_candidates(
        PermutationSolution([2, 1, 0, 5, 4, 3]), PermutationSolution([0, 1, 2, 3, 4, 5])
    ) == []


def test_pr_candidates_strictly_reduce_difference():
    r = oracles.make_rng(28)
    inst = LopInstance(oracles.rand_lop_matrix(r, 7))
    for _ in range(300):
        cur = PermutationSolution(oracles.rand_perm(r, 7))
        tgt = PermutationSolution(oracles.rand_perm(r, 7))
        if cur == tgt:
            continue
        base = oracles.position_delta(cur.order, tgt.order)
        for step in inst.pr_candidates(cur, tgt):
            scratch = cur.copy()
            scratch.cached_objective = evaluate(inst, scratch)
            inst.apply_move(scratch, step.move)
            after = oracles.position_delta(scratch.order, tgt.order)
            assert after < base
            assert step.reaches_guiding == (after == 0)
            assert step.delta == oracles.lop_value(inst.cost, scratch.order) - oracles.lop_value(
                inst.cost, cur.order
            )


def test_pr_candidates_rejects_identical_endpoints():
    inst = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(30), 4))
    sol = PermutationSolution([1, 0, 3, 2])
    with pytest.raises(ValueError):
        inst.pr_candidates(sol, sol.copy())


def test_absent_attributes_and_attribute_move():
    inst = LopInstance(oracles.rand_lop_matrix(oracles.make_rng(29), 4))
    cur = PermutationSolution([0, 1, 2, 3])
    guide = PermutationSolution([0, 2, 1, 3])
    attrs = inst.absent_attributes(cur, guide)
    assert sorted(attrs) == [(1, 2), (2, 1)]
    move, d = inst.attribute_move(cur, (2, 1))
    assert (move.element, move.to_pos) == (2, 1)
    scratch = cur.copy()
    evaluate(inst, scratch)
    inst.apply_move(scratch, move)
    assert scratch.order == [0, 2, 1, 3]
    assert d == oracles.lop_value(inst.cost, scratch.order) - oracles.lop_value(inst.cost, cur.order)
    with pytest.raises(ValueError):
        inst.attribute_move(cur, (0, 0))  # already in place


def test_instance_validation():
    with pytest.raises(ValueError):
        LopInstance([[0]])  # n < 2
    with pytest.raises(ValueError):
        LopInstance([[0, 1], [2, 0], [3, 4]])  # ragged
    with pytest.raises(ValueError):
        LopInstance([[0, 1, 2], [3, 0, 4]])  # short row
    with pytest.raises(ValueError):
        LopInstance([[0, 1.5], [2, 0]])  # non-integer
    with pytest.raises(ValueError):
        LopInstance([[0, 2**31], [2, 0]])  # over 32-bit
    with pytest.raises(ValueError):
        LopInstance([[0, 1], [2, 0]], neighborhood="shuffle")


def test_diagonal_stored_but_never_read():
    # nonzero diagonals are tolerated and contribute nothing to any objective
    a = LopInstance([[7, 5], [3, 9]])
    b = LopInstance([[0, 5], [3, 0]])
    for order in ([0, 1], [1, 0]):
        assert a.evaluate(PermutationSolution(order)) == b.evaluate(PermutationSolution(order))
