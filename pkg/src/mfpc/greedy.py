"""Conflict-aware augmenting-path greedy for MFPC lower bounds.

Each restart repeatedly augments along a shortest residual s-t path that
avoids blocked arcs. An arc that receives flow becomes active and all of its
conflict partners are blocked for the rest of the restart. Activation is
never undone, even if later augmentations cancel the arc's flow, so the
active set is always conflict-free and the result is feasible by
construction.

Ties among shortest paths are broken lexicographically on an arc priority
order: arc index on restart 0, a seeded random permutation on later ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .instance import FlowAssignment, Instance
from .maxflow import ResidualNetwork

DEFAULT_RESTARTS = 16


@dataclass
class HeuristicState:
    net: ResidualNetwork
    active: np.ndarray
    blocked: np.ndarray
    excluded: set[int] = field(default_factory=set)

    @classmethod
    def fresh(cls, inst: Instance) -> "HeuristicState":
        m = inst.arc_count
        return cls(ResidualNetwork(inst), np.zeros(m, bool), np.zeros(m, bool))

    def activate(self, arc: int) -> None:
        if self.active[arc]:
            return
        self.active[arc] = True
        self.blocked[self.net.inst.partners(arc)] = True
        self.blocked[self.active] = False


def restart_priority(m: int, seed: int, restart: int) -> np.ndarray:
    """Arc priority for one restart; lower rank is preferred."""
    if restart == 0:
        return np.arange(m)
    rng = np.random.default_rng([seed, restart])
    return rng.permutation(m)


def _shortest_path(state: HeuristicState, adj_sorted, closed: list[bool]) -> list[int] | None:
    """Lexicographically smallest shortest augmenting path, as residual edge ids."""
    net = state.net
    s, t = net.inst.source, net.inst.sink
    to, res = net.to, net.residual

    def usable(e):
        return res[e] > 0 and not (e % 2 == 0 and closed[e >> 1])

    dist = [-1] * net.inst.node_count
    dist[t] = 0
    queue = deque([t])
    while queue and dist[s] < 0:
        v = queue.popleft()
        for e in net.adj[v]:
            u = to[e]  # edge e ^ 1 runs u -> v
            if dist[u] < 0 and usable(e ^ 1):
                dist[u] = dist[v] + 1
                queue.append(u)
    if dist[s] < 0:
        return None
    path = []
    u = s
    while u != t:
        for e in adj_sorted[u]:
            if dist[to[e]] == dist[u] - 1 and usable(e):
                path.append(e)
                u = to[e]
                break
    return path


def _first_internal_conflict(inst: Instance, arcs: list[int]) -> int | None:
    """Position of the first path arc that conflicts with an earlier one."""
    seen = set()
    for pos, a in enumerate(arcs):
        if a in seen:
            return pos
        seen.update(inst.partners(a).tolist())
    return None


def greedy_restart(inst: Instance, priority: np.ndarray) -> FlowAssignment:
    state = HeuristicState.fresh(inst)
    net = state.net
    adj_sorted = [sorted(edges, key=lambda e: (priority[e >> 1], e & 1)) for edges in net.adj]
    while True:
        closed = state.blocked.tolist()
        for a in state.excluded:
            closed[a] = True
        path = _shortest_path(state, adj_sorted, closed)
        if path is None:
            break
        new_arcs = [e >> 1 for e in path if e % 2 == 0 and not state.active[e >> 1]]
        clash = _first_internal_conflict(inst, new_arcs)
        if clash is not None:
            # the path would activate both arcs of a pair; drop the later one
            state.excluded.add(new_arcs[clash])
            continue
        amount = min(net.residual[e] for e in path)
        for e in path:
            net.push(e, amount)
        for a in new_arcs:
            state.activate(a)
    return net.assignment()


def solve_greedy(inst: Instance, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> FlowAssignment:
    """Best conflict-feasible flow over ``restarts`` greedy runs.

    Restart ``r`` depends only on ``(seed, r)``, so the best of ``k``
    restarts never decreases as ``k`` grows.
    """
    best = FlowAssignment.zero(inst)
    for r in range(max(1, restarts)):
        sol = greedy_restart(inst, restart_priority(inst.arc_count, seed, r))
        if sol.total > best.total:
            best = sol
    return best
