"""Brute-force ground truth for M_q(n) on tiny cubes.

Deliberately shares nothing with :mod:`qboot.engine`: the graph is built
from explicit digit tuples and Hamming distances, and many seeds are run at
once as rows of a boolean matrix multiplied by the adjacency matrix.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ResourceGuardError
from .hamming_core import CubeShape, format_word

EXHAUSTIVE_LIMIT = 16
DEFAULT_BUDGET = 10**8
BATCH = 4096


def work_budget() -> int:
    """Work budget in vertex-updates; the PERC_BUDGET environment variable overrides."""
    env = os.environ.get("PERC_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass
class OracleReport:
    shape: CubeShape
    mode: str
    max_time: int | None
    witnesses: list[tuple[int, ...]]
    seeds_examined: int
    size_cap: int | None = None
    spanning_seeds: int = 0
    minimal_only: bool = False
    words: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    @property
    def lower_bound(self) -> bool:
        return self.mode == "size-capped"

    def witness_strings(self) -> list[list[str]]:
        return [[format_word(self.words[v], self.shape.q) for v in w] for w in self.witnesses]

    def to_dict(self) -> dict:
        return {
            "shape": {"n": self.shape.n, "q": self.shape.q},
            "mode": self.mode,
            "size_cap": self.size_cap,
            "lower_bound": self.lower_bound,
            "minimal_only": self.minimal_only,
            "max_time": self.max_time,
            "seeds_examined": self.seeds_examined,
            "spanning_seeds": self.spanning_seeds,
            "witnesses": self.witness_strings(),
        }


def _graph(shape: CubeShape) -> tuple[list[tuple[int, ...]], np.ndarray]:
    words = list(itertools.product(range(shape.q), repeat=shape.n))
    size = len(words)
    adj = np.zeros((size, size), dtype=np.int16)
    for u, wu in enumerate(words):
        for v, wv in enumerate(words):
            if sum(a != b for a, b in zip(wu, wv)) == 1:
                adj[u, v] = 1
    return words, adj


def batch_times(seeds: np.ndarray, adj: np.ndarray, r: int = 2) -> np.ndarray:
    """Percolation time per seed row, -1 where the row does not span."""
    state = seeds.copy()
    times = np.zeros(len(seeds), dtype=np.int64)
    live = np.ones(len(seeds), dtype=bool)
    while live.any():
        idx = np.flatnonzero(live)
        cur = state[idx]
        fresh = (~cur) & ((cur.astype(np.int16) @ adj) >= r)
        grew = fresh.any(axis=1)
        state[idx] = cur | fresh
        times[idx[grew]] += 1
        live[idx[~grew]] = False
    return np.where(state.all(axis=1), times, -1)


def _combos(size: int, cap: int):
    for k in range(cap + 1):
        yield from itertools.combinations(range(size), k)


def _estimate(shape: CubeShape, cap: int) -> int:
    size = shape.size
    seeds = sum(comb(size, k) for k in range(cap + 1))
    return seeds * size * max(shape.degree, 1)


def _enumerate(shape: CubeShape, cap: int):
    """(combination, time) for every seed of size <= cap, in canonical order."""
    words, adj = _graph(shape)
    batch = []
    for combo in _combos(shape.size, cap):
        batch.append(combo)
        if len(batch) == BATCH:
            yield from _run_batch(batch, shape.size, adj)
            batch = []
    if batch:
        yield from _run_batch(batch, shape.size, adj)


def _run_batch(batch, size, adj):
    seeds = np.zeros((len(batch), size), dtype=bool)
    for row, combo in enumerate(batch):
        seeds[row, list(combo)] = True
    return zip(batch, batch_times(seeds, adj).tolist())


def _minimal(spanning: dict[tuple[int, ...], int]) -> set[tuple[int, ...]]:
    """Spanning combinations none of whose one-smaller subsets span."""
    out = set()
    for combo in spanning:
        if all(combo[:i] + combo[i + 1 :] not in spanning for i in range(len(combo))):
            out.add(combo)
    return out


def _search(shape: CubeShape, cap: int, mode: str, minimal_only: bool) -> OracleReport:
    spanning = {}
    examined = 0
    for combo, t in _enumerate(shape, cap):
        examined += 1
        if t >= 0:
            spanning[combo] = t
    pool = _minimal(spanning) if minimal_only else spanning.keys()
    best = max((spanning[c] for c in pool), default=None)
    witnesses = sorted((c for c in pool if spanning[c] == best), key=lambda c: (len(c), c))
    words = list(itertools.product(range(shape.q), repeat=shape.n))
    return OracleReport(
        shape=shape,
        mode=mode,
        max_time=best,
        witnesses=witnesses,
        seeds_examined=examined,
        size_cap=cap if mode == "size-capped" else None,
        spanning_seeds=len(spanning),
        minimal_only=minimal_only,
        words=words,
    )


def max_time_exhaustive(shape: CubeShape, minimal_only: bool = False) -> OracleReport:
    """M_q(n) by enumerating every subset of the vertex set (q**n <= 16)."""
    if shape.size > EXHAUSTIVE_LIMIT:
        raise ResourceGuardError(
            f"full enumeration of Q_{{{shape.n},{shape.q}}} needs 2^{shape.size} seeds; "
            f"limit is q^n <= {EXHAUSTIVE_LIMIT}, use max_time_capped instead",
            estimate=2**shape.size,
            limit=2**EXHAUSTIVE_LIMIT,
        )
    return _search(shape, shape.size, "full-enumeration", minimal_only)


def _check_budget(shape: CubeShape, cap: int, budget: int | None) -> None:
    budget = work_budget() if budget is None else budget
    est = _estimate(shape, cap)
    if est > budget:
        raise ResourceGuardError(
            f"capped search with cap {cap} on Q_{{{shape.n},{shape.q}}} needs about "
            f"{est:.3g} vertex-updates, over the budget of {budget:.3g}",
            estimate=est,
            limit=budget,
        )


def max_time_capped(shape: CubeShape, size_cap: int, budget: int | None = None) -> OracleReport:
    """Largest percolation time over spanning seeds of at most ``size_cap`` vertices.

    The result is a lower bound on M_q(n).
    """
    if size_cap < 0:
        raise ValueError("size_cap must be nonnegative")
    size_cap = min(size_cap, shape.size)
    _check_budget(shape, size_cap, budget)
    return _search(shape, size_cap, "size-capped", minimal_only=False)


def minimal_spanning_sets(shape: CubeShape, size_cap: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """Every containment-minimal spanning seed with at most ``size_cap`` vertices.

    Seeds are tuples of vertex codes, sorted by size then lexicographically.
    """
    if size_cap < 0:
        raise ValueError("size_cap must be nonnegative")
    size_cap = min(size_cap, shape.size)
    _check_budget(shape, size_cap, budget)
    spanning = {combo: t for combo, t in _enumerate(shape, size_cap) if t >= 0}
    found = sorted(_minimal(spanning), key=lambda c: (len(c), c))

    # re-run every one-vertex deletion as an explicit check
    _, adj = _graph(shape)
    for combo in found:
        if not combo:
            continue
        rows = np.zeros((len(combo), shape.size), dtype=bool)
        for i in range(len(combo)):
            rows[i, list(combo[:i] + combo[i + 1 :])] = True
        if (batch_times(rows, adj) >= 0).any():
            raise AssertionError(f"seed {combo} reported minimal but a deletion still spans")
    return found
