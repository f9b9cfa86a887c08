"""Synchronous r-neighbour bootstrap percolation on Q_{n,q}.

Each round infects exactly the healthy vertices that had at least ``r``
infected neighbours at the end of the previous round.  The implementation
keeps an infected-neighbour counter per vertex; only the vertices infected
in the latest round (the frontier) push increments, so a full run costs
O(q**n * n * q) regardless of how many rounds it takes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamming_core import CubeShape, as_mask

NEVER = np.iinfo(np.uint16).max


@dataclass(frozen=True)
class InfectionRecord:
    """Per-vertex infection times of one run.

    ``time_of[v]`` is the step at which ``v`` became infected (0 for the
    seed) or :data:`NEVER`.
    """

    shape: CubeShape
    r: int
    time_of: np.ndarray
    rounds: int
    percolated: bool

    def infected_by(self, t: int) -> np.ndarray:
        """Bitmap of A_t."""
        return self.time_of <= t

    @property
    def final(self) -> np.ndarray:
        """Bitmap of the closure."""
        return self.time_of != NEVER

    @property
    def seed(self) -> np.ndarray:
        return self.time_of == 0

    def timestamps(self) -> list[int | None]:
        return [None if t == NEVER else int(t) for t in self.time_of]


def run(initial, shape: CubeShape, r: int = 2) -> InfectionRecord:
    """Run the process from ``initial`` until it stops changing."""
    if r < 1:
        raise ValueError(f"threshold r must be >= 1, got {r}")
    seed = as_mask(initial, shape)
    time_of = np.full(shape.size, NEVER, dtype=np.uint16)
    time_of[seed] = 0
    counts = np.zeros(shape.size, dtype=np.int32)
    table = shape.neighbor_table()

    frontier = np.flatnonzero(seed)
    step = 0
    while frontier.size:
        hits = table[frontier].ravel()
        # bincount is cheaper than add.at once the frontier touches a sizeable share of the cube
        if hits.size * 8 >= shape.size:
            counts += np.bincount(hits, minlength=shape.size).astype(np.int32)
            fresh = np.flatnonzero((counts >= r) & (time_of == NEVER))
        else:
            np.add.at(counts, hits, 1)
            cand = np.unique(hits)
            fresh = cand[(counts[cand] >= r) & (time_of[cand] == NEVER)]
        if not fresh.size:
            break
        step += 1
        if step >= NEVER:
            raise OverflowError("percolation time exceeds the 16-bit timestamp range")
        time_of[fresh] = step
        frontier = fresh

    time_of.flags.writeable = False
    return InfectionRecord(
        shape=shape,
        r=r,
        time_of=time_of,
        rounds=step,
        percolated=bool((time_of != NEVER).all()),
    )


def closure(initial, shape: CubeShape, r: int = 2) -> np.ndarray:
    """Bitmap of all eventually infected vertices."""
    return run(initial, shape, r).final


def percolation_time(initial, shape: CubeShape) -> int | None:
    """Rounds to infect Q_{n,q} under r = 2, or ``None`` if the seed does not span."""
    rec = run(initial, shape, 2)
    return rec.rounds if rec.percolated else None
