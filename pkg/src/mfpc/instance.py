"""MFPC instances, flow assignments, file formats and the feasibility checker.

An instance is a directed graph with a designated source and sink, positive
integer arc capacities and a set of unordered conflicting arc pairs: at most
one arc of each pair may carry positive flow.

Conflicts are held as an ``(w, 2)`` integer array with ``row[0] < row[1]``.
The literature instances carry millions of pairs, so a Python set of tuples
is not an option.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, TextIO

import numpy as np


class InstanceFormatError(ValueError):
    """Raised for malformed instance or solution text.

    ``lineno`` is 1-based, or None when the error is not tied to one line.
    """

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Arc(NamedTuple):
    tail: int
    head: int
    capacity: int


def _canonical_pairs(conflicts) -> np.ndarray:
    pairs = np.asarray(conflicts, dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("conflicts must be a sequence of arc-index pairs")
    pairs = np.sort(pairs, axis=1)
    pairs = pairs.astype(np.int32 if pairs.size == 0 or pairs.max() < 2**31 else np.int64)
    pairs.setflags(write=False)
    return pairs


@dataclass(frozen=True, eq=False)
class Instance:
    """A validated MFPC instance. Immutable once built.

    ``conflicts`` keeps the given pair order (the pair index is meaningful to
    model row names and branching tie-breaks); each pair is stored with the
    smaller arc index first.
    """

    node_count: int
    source: int
    sink: int
    arcs: tuple[Arc, ...]
    conflicts: np.ndarray = field(default_factory=lambda: np.empty((0, 2), np.int32))

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(Arc(int(t), int(h), int(c)) for t, h, c in self.arcs))
        object.__setattr__(self, "conflicts", _canonical_pairs(self.conflicts))
        self._validate()

    def _validate(self):
        n = self.node_count
        if n < 2:
            raise ValueError("an instance needs at least two nodes")
        for name, v in (("source", self.source), ("sink", self.sink)):
            if not 0 <= v < n:
                raise ValueError(f"{name} {v} outside [0, {n})")
        if self.source == self.sink:
            raise ValueError("source and sink coincide")
        seen = set()
        for k, (u, v, cap) in enumerate(self.arcs):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {k} ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ValueError(f"arc {k} is a self-loop on node {u}")
            if cap < 1:
                raise ValueError(f"arc {k} has non-positive capacity {cap}")
            if (u, v) in seen:
                raise ValueError(f"arc {k} duplicates ({u}, {v})")
            seen.add((u, v))
        c = self.conflicts
        if len(c):
            m = len(self.arcs)
            if c.min() < 0 or c.max() >= m:
                raise ValueError(f"conflict references an arc outside [0, {m})")
            if np.any(c[:, 0] == c[:, 1]):
                k = int(np.flatnonzero(c[:, 0] == c[:, 1])[0])
                raise ValueError(f"conflict {k} pairs arc {c[k, 0]} with itself")
            codes = c[:, 0].astype(np.int64) * m + c[:, 1]
            if len(np.unique(codes)) != len(codes):
                raise ValueError("duplicate conflict pair")

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def conflict_count(self) -> int:
        return len(self.conflicts)

    @cached_property
    def tails(self) -> np.ndarray:
        return np.array([a.tail for a in self.arcs], dtype=np.int64)

    @cached_property
    def heads(self) -> np.ndarray:
        return np.array([a.head for a in self.arcs], dtype=np.int64)

    @cached_property
    def capacities(self) -> np.ndarray:
        return np.array([a.capacity for a in self.arcs], dtype=np.int64)

    @cached_property
    def conflict_partners(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency of the conflict graph: ``(indptr, partners)``.

        Partners of arc ``a`` are ``partners[indptr[a]:indptr[a + 1]]``.
        """
        m = self.arc_count
        c = self.conflicts
        src = np.concatenate([c[:, 0], c[:, 1]])
        dst = np.concatenate([c[:, 1], c[:, 0]])
        order = np.argsort(src, kind="stable")
        indptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=m), out=indptr[1:])
        return indptr, dst[order]

    @cached_property
    def conflicted_arcs(self) -> np.ndarray:
        """Sorted indices of arcs that appear in at least one conflict pair."""
        return np.unique(self.conflicts)

    def partners(self, arc: int) -> np.ndarray:
        indptr, partners = self.conflict_partners
        return partners[indptr[arc]:indptr[arc + 1]]

    def arc_index(self, tail: int, head: int) -> int:
        for k, a in enumerate(self.arcs):
            if a.tail == tail and a.head == head:
                return k
        raise KeyError((tail, head))

    def with_conflicts(self, conflicts) -> "Instance":
        return Instance(self.node_count, self.source, self.sink, self.arcs, conflicts)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.source == other.source
            and self.sink == other.sink
            and self.arcs == other.arcs
            and np.array_equal(self.conflicts, other.conflicts)
        )

    __hash__ = None

    def __repr__(self):
        return (f"Instance(n={self.node_count}, m={self.arc_count}, w={self.conflict_count}, "
                f"source={self.source}, sink={self.sink})")


@dataclass(frozen=True)
class FlowAssignment:
    """Integer flow per arc plus the claimed s-t total."""

    flow: tuple[int, ...]
    total: int

    def __post_init__(self):
        object.__setattr__(self, "flow", tuple(int(f) for f in self.flow))
        object.__setattr__(self, "total", int(self.total))

    @classmethod
    def zero(cls, inst: Instance) -> "FlowAssignment":
        return cls((0,) * inst.arc_count, 0)

    def activation(self) -> "ActivationPattern":
        """The canonical activation pattern ``x = (flow > 0)``."""
        return ActivationPattern(tuple(f > 0 for f in self.flow))

    @property
    def support(self) -> list[int]:
        return [a for a, f in enumerate(self.flow) if f > 0]


@dataclass(frozen=True)
class ActivationPattern:
    active: tuple[bool, ...]


class Violation(NamedTuple):
    kind: str  # capacity | conservation | source | sink | conflict
    where: tuple
    detail: str


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def check_feasible(inst: Instance, sol: FlowAssignment) -> Verdict:
    """Check capacities, conservation, the declared total and every conflict.

    All violations are collected, not just the first one.
    """
    m = inst.arc_count
    if len(sol.flow) != m:
        raise ValueError(f"flow has {len(sol.flow)} entries, instance has {m} arcs")
    flow = np.array(sol.flow, dtype=np.int64).reshape(m)
    cap = inst.capacities
    out = []

    for a in np.flatnonzero((flow < 0) | (flow > cap)):
        a = int(a)
        out.append(Violation("capacity", (a,), f"arc {a}: flow {flow[a]} outside [0, {cap[a]}]"))

    net_out = np.zeros(inst.node_count, dtype=np.int64)
    if m:
        np.add.at(net_out, inst.tails, flow)
        np.subtract.at(net_out, inst.heads, flow)
    for v in range(inst.node_count):
        if v in (inst.source, inst.sink):
            continue
        if net_out[v] != 0:
            out.append(Violation("conservation", (v,), f"node {v}: net outflow {net_out[v]}"))
    if net_out[inst.source] != sol.total:
        out.append(Violation("source", (inst.source,),
                             f"source net outflow {net_out[inst.source]} != total {sol.total}"))
    if -net_out[inst.sink] != sol.total:
        out.append(Violation("sink", (inst.sink,),
                             f"sink net inflow {-net_out[inst.sink]} != total {sol.total}"))

    c = inst.conflicts
    if len(c):
        pos = flow > 0
        for k in np.flatnonzero(pos[c[:, 0]] & pos[c[:, 1]]):
            a, b = int(c[k, 0]), int(c[k, 1])
            out.append(Violation("conflict", (a, b), f"pair {int(k)}: arcs {a} and {b} both carry flow"))
    return Verdict(tuple(out))


# --- text formats -------------------------------------------------------------

def _ints(tokens, lineno, count):
    if len(tokens) != count:
        raise InstanceFormatError(f"expected {count} integers, got {len(tokens)}", lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceFormatError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str | TextIO) -> Instance:
    """Parse the line-oriented instance format.

    ::

        p mfpc <n> <m> <w>
        n s <node>
        n t <node>
        a <tail> <head> <capacity>   (m lines; arc index = order of appearance)
        c <arc> <arc>                (w lines)

    Blank lines and lines starting with ``#`` are ignored.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    header = None
    header_line = None
    terminals = {}
    arcs = []
    arc_lines = []
    seen = {}
    pairs = []
    pair_lines = []
    for lineno, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        tag = tokens[0]
        if header is None and tag != "p":
            raise InstanceFormatError("expected 'p mfpc <n> <m> <w>' header first", lineno)
        if tag == "a":
            u, v, cap = _ints(tokens[1:], lineno, 3)
            n = header[0]
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceFormatError(f"arc ({u}, {v}) has a node id outside [0, {n})", lineno)
            if u == v:
                raise InstanceFormatError(f"self-loop on node {u}", lineno)
            if cap < 1:
                raise InstanceFormatError(f"capacity {cap} is not positive", lineno)
            if (u, v) in seen:
                raise InstanceFormatError(f"duplicate arc ({u}, {v}), first on line {seen[u, v]}", lineno)
            seen[u, v] = lineno
            arcs.append((u, v, cap))
            arc_lines.append(lineno)
        elif tag == "c":
            if len(tokens) != 3:
                raise InstanceFormatError("malformed conflict, expected 'c <arc> <arc>'", lineno)
            i, j = _ints(tokens[1:], lineno, 2)
            if i == j:
                raise InstanceFormatError(f"arc {i} declared in conflict with itself", lineno)
            pairs.append((i, j) if i < j else (j, i))
            pair_lines.append(lineno)
        elif tag == "p":
            if header is not None:
                raise InstanceFormatError("second header line", lineno)
            if len(tokens) != 5 or tokens[1] != "mfpc":
                raise InstanceFormatError("malformed header, expected 'p mfpc <n> <m> <w>'", lineno)
            header = _ints(tokens[2:], lineno, 3)
            header_line = lineno
            if header[0] < 2 or header[1] < 0 or header[2] < 0:
                raise InstanceFormatError("header counts out of range", lineno)
        elif tag == "n":
            if len(tokens) != 3 or tokens[1] not in ("s", "t"):
                raise InstanceFormatError("malformed terminal line, expected 'n s|t <node>'", lineno)
            if tokens[1] in terminals:
                raise InstanceFormatError(f"terminal '{tokens[1]}' declared twice", lineno)
            (node,) = _ints(tokens[2:], lineno, 1)
            if not 0 <= node < header[0]:
                raise InstanceFormatError(f"node id {node} outside [0, {header[0]})", lineno)
            terminals[tokens[1]] = node
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno)

    if header is None:
        raise InstanceFormatError("missing header")
    n, m, w = header
    if len(arcs) != m:
        raise InstanceFormatError(f"header declares {m} arcs, found {len(arcs)}", header_line)
    if len(pairs) != w:
        raise InstanceFormatError(f"header declares {w} conflicts, found {len(pairs)}", header_line)
    for key in ("s", "t"):
        if key not in terminals:
            raise InstanceFormatError(f"missing 'n {key} <node>' line", header_line)
    if terminals["s"] == terminals["t"]:
        raise InstanceFormatError("source and sink coincide", header_line)

    conflicts = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if w:
        bad = np.flatnonzero((conflicts[:, 0] < 0) | (conflicts[:, 1] >= m))
        if len(bad):
            k = int(bad[0])
            raise InstanceFormatError(f"conflict references arc outside [0, {m})", pair_lines[k])
        codes = conflicts[:, 0] * m + conflicts[:, 1]
        _, first, counts = np.unique(codes, return_index=True, return_counts=True)
        if np.any(counts > 1):
            dup_code = codes[first[counts > 1][0]]
            k = int(np.flatnonzero(codes == dup_code)[1])
            raise InstanceFormatError("duplicate conflict pair", pair_lines[k])
    return Instance(n, terminals["s"], terminals["t"], tuple(Arc(*a) for a in arcs), conflicts)


def serialize_instance(inst: Instance) -> str:
    buf = io.StringIO()
    buf.write(f"p mfpc {inst.node_count} {inst.arc_count} {inst.conflict_count}\n")
    buf.write(f"n s {inst.source}\nn t {inst.sink}\n")
    for u, v, cap in inst.arcs:
        buf.write(f"a {u} {v} {cap}\n")
    c = inst.conflicts
    if len(c):
        buf.write("\n".join(f"c {i} {j}" for i, j in c.tolist()))
        buf.write("\n")
    return buf.getvalue()


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh)


def write_instance(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_instance(inst))


def parse_solution(text: str | Iterable[str], arc_count: int) -> FlowAssignment:
    """Parse ``z <total>`` followed by ``f <arc> <flow>`` lines; missing arcs carry 0."""
    lines = text.splitlines() if isinstance(text, str) else text
    total = None
    flow = [0] * arc_count
    assigned = set()
    for lineno, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if tokens[0] == "z":
            if total is not None:
                raise InstanceFormatError("second 'z' line", lineno)
            (total,) = _ints(tokens[1:], lineno, 1)
        elif tokens[0] == "f":
            a, f = _ints(tokens[1:], lineno, 2)
            if not 0 <= a < arc_count:
                raise InstanceFormatError(f"arc index {a} outside [0, {arc_count})", lineno)
            if a in assigned:
                raise InstanceFormatError(f"arc {a} assigned twice", lineno)
            assigned.add(a)
            flow[a] = f
        else:
            raise InstanceFormatError(f"unknown line tag {tokens[0]!r}", lineno)
    if total is None:
        raise InstanceFormatError("missing 'z <total>' line")
    return FlowAssignment(tuple(flow), total)


def serialize_solution(sol: FlowAssignment) -> str:
    lines = [f"z {sol.total}"]
    lines += [f"f {a} {f}" for a, f in enumerate(sol.flow) if f > 0]
    return "\n".join(lines) + "\n"


def read_solution(path, arc_count: int) -> FlowAssignment:
    with open(path) as fh:
        return parse_solution(fh, arc_count)

