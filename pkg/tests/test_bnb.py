import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfpc import Arc, FlowAssignment, Instance, check_feasible, max_flow, select_branch_pair, solve_bnb, solve_bruteforce
from mfpc.bnb import FEASIBLE, OPTIMAL

from conftest import random_instance


def test_figure1_bnb(fig1):
    out = solve_bnb(fig1, time_limit=10)
    assert out.status == OPTIMAL
    assert out.lower == out.upper == 5
    assert check_feasible(fig1, out.best).ok and out.best.total == 5


def test_figure1_bnb_without_greedy_seed(fig1):
    out = solve_bnb(fig1, time_limit=10, seed_greedy=False)
    assert out.lower == out.upper == 5
    assert out.nodes_explored <= 2 ** fig1.conflict_count


def test_figure1_bruteforce(fig1):
    assert len(fig1.conflicted_arcs) == 8
    out = solve_bruteforce(fig1)
    assert out.status == OPTIMAL and out.lower == out.upper == 5
    assert check_feasible(fig1, out.best).ok


def test_conflict_free_single_node(fig1):
    free = fig1.with_conflicts([])
    out = solve_bnb(free, time_limit=10)
    assert out.lower == 9 and out.nodes_explored == 1
    assert solve_bruteforce(free).lower == 9
    assert solve_bruteforce(free).nodes_explored == 1


def test_all_source_arcs_conflict_with_all_sink_arcs():
    # s=0, t=3; two routes 0-1-3 and 0-2-3; every s-out arc clashes with every t-in arc
    arcs = (Arc(0, 1, 4), Arc(1, 3, 4), Arc(0, 2, 7), Arc(2, 3, 7))
    inst = Instance(4, 0, 3, arcs, [(0, 1), (0, 3), (2, 1), (2, 3)])
    assert solve_bruteforce(inst).lower == 0
    out = solve_bnb(inst, time_limit=10)
    assert out.status == OPTIMAL and out.lower == 0


def test_bruteforce_limit():
    arcs = tuple(Arc(0, v, 1) for v in range(1, 23))
    inst = Instance(23, 0, 22, arcs, [(2 * k, 2 * k + 1) for k in range(11)])
    with pytest.raises(ValueError):
        solve_bruteforce(inst)


def _flow(values):
    return FlowAssignment(tuple(values), 0)


def test_select_pair_by_min_flow():
    arcs = tuple(Arc(0, v, 9) for v in range(1, 5))
    inst = Instance(5, 0, 4, arcs, [(0, 1), (2, 3)])
    assert select_branch_pair(inst, _flow([1, 5, 3, 4])) == 1


def test_select_single_pair():
    arcs = tuple(Arc(0, v, 9) for v in range(1, 5))
    inst = Instance(5, 0, 4, arcs, [(0, 1), (2, 3)])
    assert select_branch_pair(inst, _flow([0, 5, 3, 4])) == 1


def test_select_tie_smallest_index():
    arcs = tuple(Arc(0, v, 9) for v in range(1, 5))
    inst = Instance(5, 0, 4, arcs, [(2, 3), (0, 1)])
    assert select_branch_pair(inst, _flow([2, 2, 2, 2])) == 0


def test_select_requires_violation():
    arcs = tuple(Arc(0, v, 9) for v in range(1, 3))
    inst = Instance(3, 0, 2, arcs, [(0, 1)])
    with pytest.raises(ValueError):
        select_branch_pair(inst, _flow([1, 0]))
    with pytest.raises(ValueError):
        select_branch_pair(inst, _flow([1, 1]), frozenset({0}))


@pytest.mark.parametrize("seed", range(60))
def test_bnb_matches_oracle(seed):
    inst = random_instance(np.random.default_rng(seed))
    expected = solve_bruteforce(inst).lower
    for greedy in (True, False):
        out = solve_bnb(inst, time_limit=30, seed_greedy=greedy)
        assert out.status == OPTIMAL
        assert out.lower == out.upper == expected
        assert check_feasible(inst, out.best).ok
        assert out.nodes_explored <= 2 ** inst.conflict_count


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_bounds_valid_under_node_limit(seed, limit):
    inst = random_instance(np.random.default_rng(seed), w_max=12)
    opt = solve_bruteforce(inst).lower
    out = solve_bnb(inst, time_limit=30, node_limit=limit, seed_greedy=False)
    assert out.lower <= opt <= out.upper
    assert (out.status == OPTIMAL) == (out.lower == out.upper)
    assert out.status in (OPTIMAL, FEASIBLE)
    assert check_feasible(inst, out.best).ok and out.best.total == out.lower
    assert out.upper <= max_flow(inst).total


def test_trace_incumbents_feasible_and_increasing():
    inst = random_instance(np.random.default_rng(11), m_max=30, w_max=8)
    out = solve_bnb(inst, time_limit=30, seed_greedy=False)
    values = [v for _, v in out.trace]
    assert values == sorted(set(values))
    assert out.time_first_best <= out.elapsed


def test_deterministic():
    inst = random_instance(np.random.default_rng(5), w_max=8)
    a = solve_bnb(inst, time_limit=30)
    b = solve_bnb(inst, time_limit=30)
    assert (a.nodes_explored, a.trace, a.best) == (b.nodes_explored, b.trace, b.best)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_adding_conflict_never_helps(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, w_max=6)
    m = inst.arc_count
    if m < 2:
        return
    existing = {tuple(p) for p in inst.conflicts.tolist()}
    free = [(i, j) for i in range(m) for j in range(i + 1, m) if (i, j) not in existing]
    if not free:
        return
    extra = free[int(rng.integers(len(free)))]
    bigger = inst.with_conflicts(np.vstack([inst.conflicts, [extra]]))
    if len(bigger.conflicted_arcs) > 20:
        return
    assert solve_bruteforce(bigger).lower <= solve_bruteforce(inst).lower


def test_time_limit_validation(fig1):
    with pytest.raises(ValueError):
        solve_bnb(fig1, time_limit=0)
