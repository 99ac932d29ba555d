"""Exact MFPC solvers: best-first branch-and-bound and a brute-force oracle.

Branch-and-bound relaxes every unresolved conflict and bounds each node with
the classical max flow on the arcs not yet forbidden. A relaxed flow that
violates no conflict is attainable and closes its node. Otherwise a violated
pair ``(a, b)`` is split into two children, one forbidding ``a`` and the
other forbidding ``b``. No feasible solution keeps both arcs positive, so the
two children together cover every feasible completion.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .greedy import DEFAULT_RESTARTS, solve_greedy
from .instance import FlowAssignment, Instance, check_feasible
from .maxflow import max_flow

OPTIMAL = "optimal"
FEASIBLE = "feasible"

BRUTEFORCE_MAX_ARCS = 20


@dataclass(frozen=True)
class SearchNode:
    forbidden: frozenset[int]
    bound: int
    depth: int
    relaxed: FlowAssignment = field(repr=False, compare=False)


@dataclass
class SolveOutcome:
    best: FlowAssignment
    lower: int
    upper: int
    status: str
    nodes_explored: int = 0
    elapsed: float = 0.0
    time_first_best: float = 0.0
    trace: list[tuple[int, int]] = field(default_factory=list)  # (nodes explored, incumbent value)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class SoundnessError(AssertionError):
    pass


def violated_pairs(inst: Instance, relaxed: FlowAssignment) -> np.ndarray:
    """Indices of conflict pairs whose two arcs both carry flow."""
    c = inst.conflicts
    if not len(c):
        return np.empty(0, dtype=np.int64)
    pos = np.asarray(relaxed.flow, dtype=np.int64) > 0
    return np.flatnonzero(pos[c[:, 0]] & pos[c[:, 1]])


def select_branch_pair(inst: Instance, relaxed: FlowAssignment, forbidden=frozenset()) -> int:
    """Index of the violated pair with the largest smaller flow.

    Ties go to the smallest pair index. A pair counts as violated when both
    arcs carry positive relaxed flow and neither is forbidden.
    """
    cand = violated_pairs(inst, relaxed)
    if forbidden:
        c = inst.conflicts
        keep = [k for k in cand if c[k, 0] not in forbidden and c[k, 1] not in forbidden]
        cand = np.asarray(keep, dtype=np.int64)
    if not len(cand):
        raise ValueError("no violated conflict pair to branch on")
    flow = np.asarray(relaxed.flow, dtype=np.int64)
    c = inst.conflicts[cand]
    strength = np.minimum(flow[c[:, 0]], flow[c[:, 1]])
    # argmax returns the first maximum, and cand is ascending
    return int(cand[int(np.argmax(strength))])


class _Incumbent:
    def __init__(self, inst: Instance, start: float):
        self.inst = inst
        self.start = start
        self.best = FlowAssignment.zero(inst)
        self.value = 0
        self.found_at = 0.0
        self.trace: list[tuple[int, int]] = []

    def offer(self, sol: FlowAssignment, nodes: int) -> bool:
        if sol.total <= self.value:
            return False
        verdict = check_feasible(self.inst, sol)
        if not verdict.ok:
            raise SoundnessError(f"infeasible incumbent candidate: {verdict.violations[:3]}")
        self.best, self.value = sol, sol.total
        self.found_at = time.perf_counter() - self.start
        self.trace.append((nodes, sol.total))
        return True


def solve_bnb(
    inst: Instance,
    time_limit: float = 60.0,
    node_limit: int | None = None,
    *,
    seed_greedy: bool = True,
    greedy_seed: int = 0,
    greedy_restarts: int = DEFAULT_RESTARTS,
) -> SolveOutcome:
    """Solve an MFPC instance to proven optimality, or report bounds at the limit.

    Node order is best-first on the relaxation bound, deeper nodes first on
    ties, then insertion order. When a limit is hit, ``upper`` is the largest
    bound among open nodes (or the incumbent value if that is larger).
    """
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    start = time.perf_counter()
    deadline = start + time_limit
    inc = _Incumbent(inst, start)
    if seed_greedy:
        inc.offer(solve_greedy(inst, seed=greedy_seed, restarts=greedy_restarts), 0)

    counter = itertools.count()
    root_flow = max_flow(inst)
    root = SearchNode(frozenset(), root_flow.total, 0, root_flow)
    heap = [(-root.bound, -root.depth, next(counter), root)]
    explored = 0

    while heap:
        if time.perf_counter() >= deadline or (node_limit is not None and explored >= node_limit):
            break
        _, _, _, node = heapq.heappop(heap)
        explored += 1
        if node.bound <= inc.value:
            continue
        broken = violated_pairs(inst, node.relaxed)
        if not len(broken):
            inc.offer(node.relaxed, explored)
            continue
        k = select_branch_pair(inst, node.relaxed, node.forbidden)
        for arc in inst.conflicts[k].tolist():
            forbidden = node.forbidden | {arc}
            relaxed = max_flow(inst, forbidden)
            if relaxed.total > node.bound:
                raise SoundnessError("child bound exceeds parent bound")
            if relaxed.total <= inc.value:
                continue
            child = SearchNode(forbidden, relaxed.total, node.depth + 1, relaxed)
            heapq.heappush(heap, (-child.bound, -child.depth, next(counter), child))

    # heap is empty unless a limit stopped the search
    upper = max([inc.value] + [-item[0] for item in heap])
    status = OPTIMAL if upper == inc.value else FEASIBLE
    return SolveOutcome(
        best=inc.best,
        lower=inc.value,
        upper=upper,
        status=status,
        nodes_explored=explored,
        elapsed=time.perf_counter() - start,
        time_first_best=inc.found_at,
        trace=inc.trace,
    )


def _independent_subsets(arcs: list[int], partners: dict[int, set[int]]):
    def grow(k, chosen, excluded):
        if k == len(arcs):
            yield chosen
            return
        yield from grow(k + 1, chosen, excluded)
        a = arcs[k]
        if a not in excluded:
            yield from grow(k + 1, chosen | {a}, excluded | partners[a])
    yield from grow(0, frozenset(), frozenset())


def solve_bruteforce(inst: Instance, max_arcs: int = BRUTEFORCE_MAX_ARCS) -> SolveOutcome:
    """Exact optimum by enumerating conflict-free subsets of the conflicted arcs.

    For every independent set ``T`` of the conflict graph on the conflicted
    arcs ``S``, take the max flow with ``S - T`` disabled. The positive arcs
    of any feasible flow, restricted to ``S``, form such a ``T``, so the best
    of these flows is optimal.
    """
    start = time.perf_counter()
    conflicted = [int(a) for a in inst.conflicted_arcs]
    if len(conflicted) > max_arcs:
        raise ValueError(f"{len(conflicted)} conflicted arcs exceed the brute-force limit of {max_arcs}")
    partners = {a: set() for a in conflicted}
    for a, b in inst.conflicts.tolist():
        partners[a].add(b)
        partners[b].add(a)
    every = frozenset(conflicted)
    best = FlowAssignment.zero(inst)
    count = 0
    for subset in _independent_subsets(conflicted, partners):
        count += 1
        sol = max_flow(inst, every - subset)
        if sol.total > best.total:
            best = sol
    elapsed = time.perf_counter() - start
    return SolveOutcome(best, best.total, best.total, OPTIMAL, count, elapsed, elapsed)
