"""Benchmark instance generation on the (n, p, d, I) parameter grid.

Densities are ratios: ``m = round(p * n * (n - 1))`` arcs out of all ordered
node pairs, and ``w = round(d * m * (m - 1) / 2)`` conflicts out of all
unordered arc pairs, rounding half up.

Every instance embeds a random simple s-t path first, and no two arcs of that
path are ever placed in conflict, so a flow of at least the path's
bottleneck capacity is always feasible. Capacity intervals include both
ends.

Randomness comes from numpy's PCG64 bit generator, never from the platform
default, so instances depend only on the seed.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .instance import Arc, FlowAssignment, Instance

NODE_COUNTS = (40, 50, 60, 70, 80)
ARC_DENSITIES = (0.3, 0.4, 0.5, 0.6)
CONFLICT_DENSITIES = (0.3, 0.4, 0.5, 0.6)
CAPACITY_REGIMES = {1: (10, 15), 2: (15, 20)}
MAX_PATH_INNER = 4


class GeneratorError(ValueError):
    pass


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class GenParams:
    n: int
    p: float
    d: float
    I: int  # noqa: E741
    seed: int = 0

    @property
    def m(self) -> int:
        return _round_half_up(self.p * self.n * (self.n - 1))

    @property
    def w(self) -> int:
        m = self.m
        return _round_half_up(self.d * m * (m - 1) / 2)

    @property
    def capacity_range(self) -> tuple[int, int]:
        return CAPACITY_REGIMES[self.I]

    @property
    def instance_id(self) -> str:
        return f"mfpc_n{self.n}_p{self.p:g}_d{self.d:g}_I{self.I}"

    def on_grid(self) -> bool:
        return (self.n in NODE_COUNTS and self.p in ARC_DENSITIES
                and self.d in CONFLICT_DENSITIES and self.I in CAPACITY_REGIMES)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _sample_excluding(rng, population: int, k: int, excluded: np.ndarray) -> np.ndarray:
    """``k`` distinct codes from ``range(population)`` minus ``excluded``, ascending."""
    excluded = np.unique(np.asarray(excluded, dtype=np.int64))
    avail = population - len(excluded)
    if k > avail:
        raise GeneratorError(f"cannot draw {k} items from {avail} eligible")
    picks = np.sort(rng.choice(avail, size=k, replace=False).astype(np.int64))
    # shift past the excluded codes: the r-th free code is r + #{j : excluded[j] - j <= r}
    gaps = excluded - np.arange(len(excluded))
    return picks + np.searchsorted(gaps, picks, side="right")


def _decode_ordered(codes: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    u = codes // (n - 1)
    r = codes % (n - 1)
    v = r + (r >= u)
    return u, v


def _encode_ordered(u, v, n: int):
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return u * (n - 1) + v - (v > u)


def _decode_pairs(codes: np.ndarray) -> np.ndarray:
    """Code ``j(j-1)/2 + i`` for ``i < j`` back to ``(i, j)``."""
    j = np.floor((1 + np.sqrt(1 + 8 * codes.astype(np.float64))) / 2).astype(np.int64)
    j -= (j * (j - 1) // 2) > codes
    j += ((j + 1) * j // 2) <= codes
    i = codes - j * (j - 1) // 2
    return np.stack([i, j], axis=1)


def _encode_pairs(i, j):
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    return hi * (hi - 1) // 2 + lo


def build_random(n: int, m: int, w: int, capacity_range: tuple[int, int], seed: int,
                 max_path_inner: int = MAX_PATH_INNER) -> tuple[Instance, list[int]]:
    """Random instance with exactly ``m`` arcs and ``w`` conflicts.

    Returns the instance and the arc indices of the embedded s-t path, in
    path order. The source is node 0 and the sink node ``n - 1``.
    """
    if n < 2:
        raise GeneratorError("need at least two nodes")
    if not 1 <= m <= n * (n - 1):
        raise GeneratorError(f"arc count {m} outside [1, {n * (n - 1)}]")
    lo, hi = capacity_range
    if not 1 <= lo <= hi:
        raise GeneratorError(f"bad capacity range {capacity_range}")
    rng = _rng(seed)
    s, t = 0, n - 1

    inner_max = min(n - 2, max_path_inner, m - 1)
    k = int(rng.integers(0, inner_max + 1)) if inner_max > 0 else 0
    inner = rng.choice(np.arange(1, n - 1), size=k, replace=False) if k else np.empty(0, np.int64)
    nodes = [s, *inner.tolist(), t]
    path_u = np.array(nodes[:-1], dtype=np.int64)
    path_v = np.array(nodes[1:], dtype=np.int64)
    path_codes = _encode_ordered(path_u, path_v, n)

    rest = _sample_excluding(rng, n * (n - 1), m - len(path_codes), path_codes)
    ru, rv = _decode_ordered(rest, n)
    tails = np.concatenate([path_u, ru])
    heads = np.concatenate([path_v, rv])
    order = rng.permutation(m)
    tails, heads = tails[order], heads[order]
    caps = rng.integers(lo, hi + 1, size=m)
    position = np.empty(m, dtype=np.int64)
    position[order] = np.arange(m)
    path_arcs = position[: len(path_codes)]

    total_pairs = m * (m - 1) // 2
    pi, pj = np.meshgrid(path_arcs, path_arcs, indexing="ij")
    upper = pi < pj
    protected = _encode_pairs(pi[upper], pj[upper])
    if w > total_pairs - len(protected):
        raise GeneratorError(
            f"{w} conflicts requested but only {total_pairs - len(protected)} arc pairs are eligible")
    conflicts = _decode_pairs(_sample_excluding(rng, total_pairs, w, protected))

    arcs = tuple(Arc(int(u), int(v), int(c)) for u, v, c in zip(tails, heads, caps))
    return Instance(n, s, t, arcs, conflicts), [int(a) for a in path_arcs]


def generate_with_path(params: GenParams) -> tuple[Instance, list[int]]:
    if not params.on_grid():
        warnings.warn(f"{params} is outside the benchmark parameter grid", stacklevel=2)
    if params.I not in CAPACITY_REGIMES:
        raise GeneratorError(f"unknown capacity regime {params.I}")
    return build_random(params.n, params.m, params.w, params.capacity_range, params.seed)


def generate(params: GenParams) -> Instance:
    return generate_with_path(params)[0]


def path_flow(inst: Instance, path: list[int]) -> FlowAssignment:
    """Push the bottleneck capacity along ``path``."""
    amount = min(inst.arcs[a].capacity for a in path)
    flow = [0] * inst.arc_count
    for a in path:
        flow[a] = amount
    return FlowAssignment(tuple(flow), amount)


def grid_params(seed: int) -> list[GenParams]:
    """The 160 grid points, each with a seed derived from ``seed``."""
    out = []
    combos = itertools.product(NODE_COUNTS, ARC_DENSITIES, CONFLICT_DENSITIES, CAPACITY_REGIMES)
    for idx, (n, p, d, cap) in enumerate(combos):
        child = int(np.random.SeedSequence([seed, idx]).generate_state(1, np.uint64)[0])
        out.append(GenParams(n, p, d, cap, child))
    return out


def grid(seed: int) -> Iterator[tuple[GenParams, Instance]]:
    for params in grid_params(seed):
        yield params, generate(params)
