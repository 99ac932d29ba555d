"""Benchmark records, gap metrics and batch runs."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .bnb import OPTIMAL, SolveOutcome, solve_bnb, solve_bruteforce
from .greedy import DEFAULT_RESTARTS, solve_greedy
from .instance import FlowAssignment, Instance, check_feasible, read_instance, serialize_solution
from .maxflow import max_flow

METHODS = ("bnb", "brute", "greedy", "maxflow-relax")
CSV_HEADER = ("instance_id", "n", "m", "w", "method", "lower", "upper", "status",
              "time_total_ms", "time_first_best_ms", "seed")
HEURISTIC = "heuristic"


class UnknownMethodError(ValueError):
    pass


def gap_lb(bk_lb: int, lb: int) -> float:
    """Percentage gap of a lower bound from the best known one; negative means improved."""
    if bk_lb <= 0:
        raise ValueError("best-known lower bound must be positive")
    return 100.0 * (bk_lb - lb) / bk_lb


def gap_ub(bk_ub: int, ub: int) -> float:
    """Percentage gap of an upper bound from the best known one; negative means improved."""
    if bk_ub <= 0:
        raise ValueError("best-known upper bound must be positive")
    return 100.0 * (ub - bk_ub) / bk_ub


@dataclass
class BenchRecord:
    instance_id: str
    n: int
    m: int
    w: int
    method: str
    lower: int
    upper: int
    status: str
    time_total_ms: float
    time_first_best_ms: float
    seed: int

    def row(self) -> list:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(f"{v:.3f}" if isinstance(v, float) else v)
        return out


def solve_method(inst: Instance, method: str, time_limit: float = 60.0, seed: int = 0,
                 restarts: int = DEFAULT_RESTARTS, node_limit: int | None = None) -> SolveOutcome:
    """Run one method and express its result as bounds plus a witness flow.

    Heuristic methods report the max-flow relaxation as their upper bound.
    """
    start = time.perf_counter()
    if method == "bnb":
        return solve_bnb(inst, time_limit, node_limit, greedy_seed=seed, greedy_restarts=restarts)
    if method == "brute":
        return solve_bruteforce(inst)
    if method == "greedy":
        best = solve_greedy(inst, seed=seed, restarts=restarts)
        found = time.perf_counter() - start
        upper = max_flow(inst).total
    elif method == "maxflow-relax":
        relaxed = max_flow(inst)
        upper = relaxed.total
        best = relaxed if check_feasible(inst, relaxed).ok else FlowAssignment.zero(inst)
        found = time.perf_counter() - start
    else:
        raise UnknownMethodError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    status = OPTIMAL if best.total == upper else HEURISTIC
    elapsed = time.perf_counter() - start
    return SolveOutcome(best, best.total, upper, status, 0, elapsed, found)


def make_record(instance_id: str, inst: Instance, method: str, out: SolveOutcome, seed: int) -> BenchRecord:
    verdict = check_feasible(inst, out.best)
    if not verdict.ok or out.best.total != out.lower:
        raise AssertionError(f"{instance_id}/{method}: lower bound {out.lower} lacks a feasible witness")
    return BenchRecord(
        instance_id, inst.node_count, inst.arc_count, inst.conflict_count, method,
        out.lower, out.upper, out.status, out.elapsed * 1000.0,
        min(out.time_first_best, out.elapsed) * 1000.0, seed,
    )


def write_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(r.row())


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run_bench(instances: Sequence, methods: Sequence[str], time_limit: float, out=None,
              seed: int = 0, restarts: int = DEFAULT_RESTARTS, solutions_dir=None) -> list[BenchRecord]:
    """Solve every (instance file, method) pair and optionally write the CSV.

    Every record's lower bound is checked against its witness flow before it
    is kept. With ``solutions_dir`` the witnesses are written there as
    ``<instance_id>.<method>.sol``.
    """
    if not methods:
        raise UnknownMethodError("unknown method: empty method list")
    for method in methods:
        if method not in METHODS:
            raise UnknownMethodError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    loaded = [(Path(p).stem, read_instance(p)) for p in instances]
    records = []
    for instance_id, inst in loaded:
        for method in methods:
            outcome = solve_method(inst, method, time_limit, seed, restarts)
            records.append(make_record(instance_id, inst, method, outcome, seed))
            if solutions_dir is not None:
                Path(solutions_dir).mkdir(parents=True, exist_ok=True)
                (Path(solutions_dir) / f"{instance_id}.{method}.sol").write_text(serialize_solution(outcome.best))
    if out is not None:
        write_csv(records, out)
    return records


def gap_table(records: Iterable[BenchRecord], best_known: dict[str, tuple[int, int]]) -> list[dict]:
    """LB/UB gaps of each record against ``{instance_id: (bk_lb, bk_ub)}``."""
    rows = []
    for r in records:
        if r.instance_id not in best_known:
            continue
        bk_lb, bk_ub = best_known[r.instance_id]
        rows.append({**asdict(r), "gap_lb": gap_lb(bk_lb, r.lower), "gap_ub": gap_ub(bk_ub, r.upper)})
    return rows


def read_best_known(path) -> dict[str, tuple[int, int]]:
    """Read ``instance_id,bk_lb,bk_ub`` rows."""
    with open(path, newline="") as fh:
        return {row["instance_id"]: (int(row["bk_lb"]), int(row["bk_ub"])) for row in csv.DictReader(fh)}

