"""Solver-agnostic MILP model of the MFPC and its LP-format export.

Variables, in order: ``f_0 .. f_{m-1}`` (arc flows, non-negative integer),
``x_0 .. x_{m-1}`` (arc activation, binary), ``z`` (total flow, non-negative
integer). Rows, in order:

* ``cons_<node>``  flow conservation, in - out + [i=s] z - [i=t] z = 0
* ``link_<arc>``   f_a - u_a x_a <= 0
* ``conf_<pair>``  x_a + x_b <= 1, one row per unordered conflict pair

Rows live in a sparse matrix because the largest benchmark instances carry
millions of conflict pairs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
import scipy.sparse as sp

from .instance import ActivationPattern, FlowAssignment, Instance, Verdict, Violation

LE, EQ, GE = "<=", "=", ">="


class Variable(NamedTuple):
    name: str
    kind: str  # continuous | integer | binary
    lower: float
    upper: float


class Constraint(NamedTuple):
    name: str
    terms: tuple[tuple[int, int], ...]  # (coefficient, variable index)
    sense: str
    rhs: int


@dataclass(frozen=True, eq=False)
class ModelIR:
    variables: tuple[Variable, ...]
    matrix: sp.csr_matrix  # rows x variables, integer coefficients
    senses: tuple[str, ...]
    rhs: np.ndarray
    row_blocks: tuple[tuple[str, int], ...]  # (name prefix, row count) in row order
    objective: tuple[tuple[int, int], ...]  # (coefficient, variable index)
    sense: str = "maximize"

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def constraint_count(self) -> int:
        return self.matrix.shape[0]

    def row_name(self, row: int) -> str:
        offset = row
        for prefix, count in self.row_blocks:
            if offset < count:
                return f"{prefix}_{offset}"
            offset -= count
        raise IndexError(row)

    def rows(self, prefix: str) -> range:
        start = 0
        for p, count in self.row_blocks:
            if p == prefix:
                return range(start, start + count)
            start += count
        raise KeyError(prefix)

    def constraint(self, row: int) -> Constraint:
        a = self.matrix
        lo, hi = a.indptr[row], a.indptr[row + 1]
        terms = tuple((int(c), int(j)) for c, j in zip(a.data[lo:hi], a.indices[lo:hi]))
        return Constraint(self.row_name(row), terms, self.senses[row], int(self.rhs[row]))

    def constraints(self) -> Iterator[Constraint]:
        for row in range(self.constraint_count):
            yield self.constraint(row)

    def index(self, name: str) -> int:
        for j, v in enumerate(self.variables):
            if v.name == name:
                return j
        raise KeyError(name)


def build_model(inst: Instance) -> ModelIR:
    n, m, w = inst.node_count, inst.arc_count, inst.conflict_count
    z = 2 * m
    variables = (
        tuple(Variable(f"f_{a}", "integer", 0, math.inf) for a in range(m))
        + tuple(Variable(f"x_{a}", "binary", 0, 1) for a in range(m))
        + (Variable("z", "integer", 0, math.inf),)
    )
    arcs = np.arange(m)
    tails, heads, caps = inst.tails, inst.heads, inst.capacities

    # conservation: +1 on arcs entering node i, -1 on arcs leaving it
    rows = [heads, tails, np.array([inst.source, inst.sink])]
    cols = [arcs, arcs, np.array([z, z])]
    vals = [np.ones(m), -np.ones(m), np.array([1, -1])]
    # linking
    rows += [n + arcs, n + arcs]
    cols += [arcs, m + arcs]
    vals += [np.ones(m), -caps]
    # conflicts
    c = inst.conflicts.astype(np.int64)
    pair_rows = n + m + np.arange(w)
    rows += [pair_rows, pair_rows]
    cols += [m + c[:, 0], m + c[:, 1]]
    vals += [np.ones(w), np.ones(w)]

    matrix = sp.csr_matrix(
        (np.concatenate(vals).astype(np.int64), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n + m + w, 2 * m + 1),
    )
    matrix.sort_indices()
    rhs = np.concatenate([np.zeros(n + m, np.int64), np.ones(w, np.int64)])
    senses = (EQ,) * n + (LE,) * (m + w)
    return ModelIR(
        variables=variables,
        matrix=matrix,
        senses=senses,
        rhs=rhs,
        row_blocks=(("cons", n), ("link", m), ("conf", w)),
        objective=((1, z),),
    )


def _linear(terms, variables) -> str:
    if not terms:
        return f"0 {variables[-1].name}"
    out = []
    for k, (coef, j) in enumerate(terms):
        name = variables[j].name
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if k == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def export_lp(model: ModelIR) -> str:
    """Render the model in CPLEX LP text format. Byte-deterministic."""
    v = model.variables
    buf = io.StringIO()
    buf.write("\\ MFPC model\n")
    buf.write("MAXIMIZE\n" if model.sense == "maximize" else "MINIMIZE\n")
    buf.write(f" obj: {_linear(model.objective, v)}\n")
    buf.write("SUBJECT TO\n")
    for con in model.constraints():
        buf.write(f" {con.name}: {_linear(con.terms, v)} {con.sense} {con.rhs}\n")
    buf.write("BOUNDS\n")
    for var in v:
        if var.kind == "binary":
            buf.write(f" 0 <= {var.name} <= 1\n")
        elif math.isinf(var.upper):
            buf.write(f" {var.name} >= {var.lower:g}\n")
        else:
            buf.write(f" {var.lower:g} <= {var.name} <= {var.upper:g}\n")
    general = [var.name for var in v if var.kind == "integer"]
    binary = [var.name for var in v if var.kind == "binary"]
    if general:
        buf.write("GENERAL\n")
        buf.write("".join(f" {name}\n" for name in general))
    if binary:
        buf.write("BINARY\n")
        buf.write("".join(f" {name}\n" for name in binary))
    buf.write("END\n")
    return buf.getvalue()


def assignment_vector(f: FlowAssignment, x: ActivationPattern, z: int) -> np.ndarray:
    return np.array(list(f.flow) + [int(b) for b in x.active] + [z], dtype=np.int64)


def validate_against_model(model: ModelIR, f: FlowAssignment, x: ActivationPattern, z: int) -> Verdict:
    """Check every row, bound and integrality condition of ``model``."""
    m = (model.variable_count - 1) // 2
    if len(f.flow) != m or len(x.active) != m:
        raise ValueError(f"assignment dimensions ({len(f.flow)}, {len(x.active)}) do not match model with m={m}")
    values = assignment_vector(f, x, z)
    out = []
    for j, var in enumerate(model.variables):
        val = values[j]
        if val < var.lower or val > var.upper:
            out.append(Violation("bound", (var.name,), f"{var.name}={val} outside [{var.lower}, {var.upper}]"))
        # integrality holds trivially for int64 values; binaries are covered by the bound check
    lhs = model.matrix @ values
    senses = np.asarray(model.senses)
    bad = (((senses == EQ) & (lhs != model.rhs))
           | ((senses == LE) & (lhs > model.rhs))
           | ((senses == GE) & (lhs < model.rhs)))
    for row in np.flatnonzero(bad):
        name = model.row_name(int(row))
        out.append(Violation(name.split("_")[0], (name,),
                             f"{name}: lhs {lhs[row]} {senses[row]} {model.rhs[row]} fails"))
    return Verdict(tuple(out))


def _independent_sets(nodes: list[int], partners: dict[int, set[int]]):
    """Every subset of ``nodes`` with no two members adjacent (includes empty)."""
    def grow(k, chosen, excluded):
        if k == len(nodes):
            yield chosen
            return
        v = nodes[k]
        yield from grow(k + 1, chosen, excluded)
        if v not in excluded:
            yield from grow(k + 1, chosen + [v], excluded | partners[v])
    yield from grow(0, [], frozenset())


def solve_model_bruteforce(model: ModelIR, max_binaries: int = 20) -> tuple[int, np.ndarray]:
    """Optimum of ``model`` by enumerating binaries, with an LP for the rest.

    Binaries that appear only in rows coupling them to continuous/integer
    variables (``link`` rows) are fixed at 1, which can only enlarge the
    feasible region. The remaining binaries are enumerated over every
    assignment that satisfies the pure-binary rows, and for each one the
    remaining problem is solved with ``scipy.optimize.linprog``. That
    problem is a network flow with integral data, so the LP vertex is integral.

    Returns ``(objective value, variable vector)``.
    """
    from scipy.optimize import linprog

    a = model.matrix.tocsr()
    nvar = model.variable_count
    is_bin = np.array([v.kind == "binary" for v in model.variables])
    pure = []
    for row in range(model.constraint_count):
        cols = a.indices[a.indptr[row]:a.indptr[row + 1]]
        if len(cols) and is_bin[cols].all():
            pure.append(row)
    for row in pure:
        lo, hi = a.indptr[row], a.indptr[row + 1]
        if not (model.senses[row] == LE and model.rhs[row] == 1 and len(a.indices[lo:hi]) == 2
                and np.all(a.data[lo:hi] == 1)):
            raise ValueError(f"row {model.row_name(row)} is not a pairwise packing row")
    partners: dict[int, set[int]] = {}
    for row in pure:
        i, j = a.indices[a.indptr[row]:a.indptr[row + 1]]
        partners.setdefault(int(i), set()).add(int(j))
        partners.setdefault(int(j), set()).add(int(i))
    free = sorted(partners)
    if len(free) > max_binaries:
        raise ValueError(f"{len(free)} binaries in packing rows exceed the enumeration limit {max_binaries}")

    other = [r for r in range(model.constraint_count) if r not in set(pure)]
    sub = a[other]
    c = np.zeros(nvar)
    for coef, j in model.objective:
        c[j] = -coef if model.sense == "maximize" else coef
    senses = np.array([model.senses[r] for r in other])
    rhs = model.rhs[other].astype(float)
    eq, le, ge = senses == EQ, senses == LE, senses == GE
    a_ub = sp.vstack([sub[le], -sub[ge]]).tocsr()
    b_ub = np.concatenate([rhs[le], -rhs[ge]])
    a_eq, b_eq = sub[eq], rhs[eq]

    best_val, best_vec = None, None
    for chosen in _independent_sets(free, partners):
        bounds = []
        chosen = set(chosen)
        for j, var in enumerate(model.variables):
            if var.kind == "binary":
                fixed = 0.0 if (j in partners and j not in chosen) else 1.0
                bounds.append((fixed, fixed))
            else:
                bounds.append((var.lower, None if math.isinf(var.upper) else var.upper))
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status != 0:
            continue
        val = round(-res.fun if model.sense == "maximize" else res.fun)
        if best_val is None or val > best_val:
            best_val, best_vec = val, np.rint(res.x).astype(np.int64)
    return best_val, best_vec

