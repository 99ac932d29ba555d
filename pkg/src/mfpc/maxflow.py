"""Classical maximum flow (conflicts ignored) and minimum cut.

Dinic's blocking-flow algorithm on an explicit residual network. Residual
edge ``2a`` is the forward direction of arc ``a`` and ``2a + 1`` its reverse,
and every node's adjacency is sorted by edge id. Exploration order is thus
ascending arc index, and the returned flow vector is reproducible.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .instance import FlowAssignment, Instance


class ResidualNetwork:
    """Single-owner mutable residual graph of an instance.

    ``residual[2a]`` is the remaining forward capacity of arc ``a`` and
    ``residual[2a + 1]`` the flow already pushed on it. Disabled arcs get
    zero forward capacity.
    """

    def __init__(self, inst: Instance, disabled: Iterable[int] = ()):
        m = inst.arc_count
        self.inst = inst
        self.disabled = frozenset(int(a) for a in disabled)
        bad = [a for a in self.disabled if not 0 <= a < m]
        if bad:
            raise ValueError(f"disabled arcs outside [0, {m}): {sorted(bad)}")
        self.to = [0] * (2 * m)
        self.residual = [0] * (2 * m)
        self.adj: list[list[int]] = [[] for _ in range(inst.node_count)]
        for a, (u, v, cap) in enumerate(inst.arcs):
            self.to[2 * a] = v
            self.to[2 * a + 1] = u
            self.residual[2 * a] = 0 if a in self.disabled else cap
            self.adj[u].append(2 * a)
            self.adj[v].append(2 * a + 1)
        # edges were appended in increasing id order per node already

    def flow_on(self, arc: int) -> int:
        return self.residual[2 * arc + 1]

    def push(self, edge: int, amount: int) -> None:
        self.residual[edge] -= amount
        self.residual[edge ^ 1] += amount

    def assignment(self) -> FlowAssignment:
        inst = self.inst
        flow = self.residual[1::2]
        total = sum(flow[a] for a in range(inst.arc_count) if inst.arcs[a].tail == inst.source)
        total -= sum(flow[a] for a in range(inst.arc_count) if inst.arcs[a].head == inst.source)
        return FlowAssignment(tuple(flow), total)

    def reachable_from_source(self) -> list[bool]:
        seen = [False] * self.inst.node_count
        seen[self.inst.source] = True
        queue = deque([self.inst.source])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.residual[e] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen

    def _levels(self) -> list[int] | None:
        level = [-1] * self.inst.node_count
        s, t = self.inst.source, self.inst.sink
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.residual[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking_flow(self, level: list[int]) -> int:
        s, t = self.inst.source, self.inst.sink
        adj, to, res = self.adj, self.to, self.residual
        it = [0] * self.inst.node_count
        pushed = 0
        while True:
            # iterative DFS along the level graph
            path: list[int] = []
            u = s
            while u != t:
                edges = adj[u]
                while it[u] < len(edges):
                    e = edges[it[u]]
                    if res[e] > 0 and level[to[e]] == level[u] + 1:
                        break
                    it[u] += 1
                else:
                    if u == s:
                        return pushed
                    # dead end: retreat and skip the edge that led here
                    level[u] = -1
                    e = path.pop()
                    u = to[e ^ 1]
                    it[u] += 1
                    continue
                path.append(e)
                u = to[e]
            amount = min(res[e] for e in path)
            for e in path:
                res[e] -= amount
                res[e ^ 1] += amount
            pushed += amount

    def augment_to_max(self) -> int:
        total = 0
        while (level := self._levels()) is not None:
            total += self._blocking_flow(level)
        return total


def max_flow(inst: Instance, disabled: Iterable[int] = ()) -> FlowAssignment:
    """Maximum integral s-t flow with ``disabled`` arcs removed, ignoring conflicts."""
    net = ResidualNetwork(inst, disabled)
    net.augment_to_max()
    return net.assignment()


def min_cut(inst: Instance, disabled: Iterable[int] = ()) -> set[int]:
    """Arcs of the minimum cut nearest the source, on the enabled subgraph.

    Their capacities sum to the max-flow value.
    """
    net = ResidualNetwork(inst, disabled)
    net.augment_to_max()
    side = net.reachable_from_source()
    return {
        a for a, (u, v, _) in enumerate(inst.arcs)
        if a not in net.disabled and side[u] and not side[v]
    }


def cut_capacity(inst: Instance, cut: Iterable[int]) -> int:
    return sum(inst.arcs[a].capacity for a in cut)
