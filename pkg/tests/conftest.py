import itertools

import numpy as np
import pytest

from mfpc import Arc, FlowAssignment, Instance, figure1, figure1_solution

S, A, B, C, D, E, T = range(7)


@pytest.fixture
def fig1():
    return figure1()


@pytest.fixture
def fig1_solution():
    return figure1_solution()


@pytest.fixture
def single_arc():
    return Instance(2, 0, 1, (Arc(0, 1, 5),))


def random_instance(rng, n_max=10, m_max=30, w_max=8, cap_max=9):
    """Unstructured random instance, deliberately not using mfpc.generator."""
    n = int(rng.integers(2, n_max + 1))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = int(rng.integers(1, min(m_max, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=m, replace=False)
    arcs = tuple(Arc(*pairs[k], int(rng.integers(1, cap_max + 1))) for k in chosen)
    arc_pairs = list(itertools.combinations(range(m), 2))
    w = int(rng.integers(0, min(w_max, len(arc_pairs)) + 1))
    conflicts = [arc_pairs[k] for k in rng.choice(len(arc_pairs), size=w, replace=False)] if w else []
    source, sink = (int(x) for x in rng.choice(n, size=2, replace=False))
    return Instance(n, source, sink, arcs, np.array(conflicts, dtype=np.int64).reshape(-1, 2))


def random_assignment(rng, inst: Instance) -> FlowAssignment:
    """A flow that is sometimes feasible, sometimes broken in one way or another."""
    m = inst.arc_count
    flow = np.zeros(m, dtype=np.int64)
    total = 0
    # route a few random walks from the source; keep the ones that reach the sink
    out = {}
    for a, (u, v, _) in enumerate(inst.arcs):
        out.setdefault(u, []).append(a)
    for _ in range(int(rng.integers(0, 4))):
        node, path, seen = inst.source, [], {inst.source}
        while node != inst.sink and node in out:
            a = int(rng.choice(out[node]))
            nxt = inst.arcs[a].head
            if nxt in seen:
                break
            path.append(a)
            seen.add(nxt)
            node = nxt
        if node == inst.sink and path:
            amount = int(rng.integers(1, 4))
            flow[path] += amount
            total += amount
    mode = rng.integers(0, 6)
    if mode == 1 and m:
        flow[int(rng.integers(m))] += int(rng.integers(-2, 3))
    elif mode == 2:
        total += int(rng.integers(-1, 2))
    elif mode == 3:
        flow = rng.integers(0, 4, size=m)
        total = int(rng.integers(0, 4))
    return FlowAssignment(tuple(int(f) for f in flow), total)


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the run summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(criterion, passed, detail=""):
        lines.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
