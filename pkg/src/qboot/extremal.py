"""Maximum percolation time M_q(n) and seeds that attain it.

Closed form (q >= 3): M_q(0) = 0, M_q(1) = 1, M_q(2) = 3 and for n >= 3

    q = 3:  n^2/3 + 2n/3        (n = 0, 1 mod 3)
            n^2/3 + 2n/3 + 1/3  (n = 2 mod 3)
    q >= 4: n^2/3 + n           (n = 0 mod 3)
            n^2/3 + n - 1/3     (otherwise)

which is the solution of M_3(n) = M_3(n-3) + 2n - 1 and
M_q(n) = M_q(n-3) + 2n (q >= 4).

Extremal seeds are built recursively: a seed for dimension n - 3 is
relabelled so that the all-zeros word is among its last infected vertices,
placed in [*]^{n-3}000, and joined by the single vertices [0]^{n-3}110 and
[2]^n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import engine
from .errors import NotPercolatingError
from .hamming_core import DEFAULT_MAX_VERTICES, CubeShape, as_mask, format_set

BASE_VALUES = (0, 1, 3)


def _closed_form(q: int, n: int) -> Fraction:
    n = Fraction(n)
    if q == 3:
        extra = Fraction(1, 3) if n % 3 == 2 else 0
        return n * n / 3 + 2 * n / 3 + extra
    if n % 3 == 0:
        return n * n / 3 + n
    return n * n / 3 + n - Fraction(1, 3)


def max_time_formula(q: int, n: int) -> int:
    if q < 3:
        raise ValueError(f"the closed form holds for q >= 3, got q={q}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n < 3:
        return BASE_VALUES[n]
    value = _closed_form(q, n)
    if value.denominator != 1:
        raise ArithmeticError(f"closed form gave non-integer {value} at q={q}, n={n}")
    return int(value)


def max_time_recursive(q: int, n: int) -> int:
    """M_q(n) from the three-step recursion and the base values."""
    if q < 3:
        raise ValueError(f"the recursion holds for q >= 3, got q={q}")
    if n < 3:
        return BASE_VALUES[n]
    return max_time_recursive(q, n - 3) + 2 * n - (1 if q == 3 else 0)


@dataclass
class ExtremalSeed:
    """A seed set with a trace of the construction pieces it is made of.

    ``pieces`` holds (label, sorted codes) pairs; the vertex set is their union.
    """

    shape: CubeShape
    pieces: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @classmethod
    def from_vertices(cls, shape: CubeShape, vertices, label: str = "given") -> "ExtremalSeed":
        codes = tuple(int(c) for c in np.flatnonzero(as_mask(vertices, shape)))
        return cls(shape, [(label, codes)] if codes else [])

    @property
    def vertices(self) -> np.ndarray:
        mask = self.shape.empty_set()
        for _, codes in self.pieces:
            mask[list(codes)] = True
        return mask

    @property
    def provenance(self) -> list[dict]:
        return [
            {"piece": label, "vertices": [self.shape.format_vertex(c) for c in codes]}
            for label, codes in self.pieces
        ]

    def to_dict(self) -> dict:
        return {
            "shape": {"n": self.shape.n, "q": self.shape.q},
            "vertices": format_set(self.vertices, self.shape),
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict, max_vertices: int = DEFAULT_MAX_VERTICES) -> "ExtremalSeed":
        shape = CubeShape(data["shape"]["n"], data["shape"]["q"], max_vertices)
        if data.get("provenance"):
            pieces = [
                (p["piece"], tuple(sorted(shape.parse_vertex(v) for v in p["vertices"])))
                for p in data["provenance"]
            ]
            seed = cls(shape, pieces)
            listed = as_mask(data.get("vertices", []), shape)
            if not np.array_equal(listed, seed.vertices):
                raise ValueError("provenance pieces do not match the listed vertices")
            return seed
        return cls.from_vertices(shape, data.get("vertices", []))

    @classmethod
    def from_json(cls, text: str, max_vertices: int = DEFAULT_MAX_VERTICES) -> "ExtremalSeed":
        return cls.from_dict(json.loads(text), max_vertices)

    def remap(self, shape: CubeShape, fn) -> "ExtremalSeed":
        """New seed on ``shape`` with every vertex word sent through ``fn``."""
        pieces = []
        for label, codes in self.pieces:
            new = sorted(shape.encode(fn(self.shape.decode(c))) for c in codes)
            pieces.append((label, tuple(new)))
        return ExtremalSeed(shape, pieces)


def last_infected(record: engine.InfectionRecord) -> np.ndarray:
    """Vertices infected in the final round (the whole seed when no round ran)."""
    if not record.percolated:
        raise NotPercolatingError("last_infected needs a percolating run")
    return record.time_of == record.rounds


def _base_seed(q: int, n: int, max_vertices: int) -> ExtremalSeed:
    shape = CubeShape(n, q, max_vertices)
    words = {0: [()], 1: [(0,), (1,)], 2: [(0, 0), (1, 1)]}[n]
    return ExtremalSeed(shape, [(f"base n={n}", tuple(sorted(shape.encode(w) for w in words)))])


def build_extremal_seed(q: int, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExtremalSeed:
    """A seed of Q_{n,q} whose percolation time is M_q(n)."""
    if q < 3:
        raise ValueError(f"extremal seeds are built for q >= 3, got q={q}")
    shape = CubeShape(n, q, max_vertices)
    if n < 3:
        return _base_seed(q, n, max_vertices)

    sub = build_extremal_seed(q, n - 3, max_vertices)
    rec = engine.run(sub.vertices, sub.shape)
    if not rec.percolated:
        raise AssertionError(f"sub-seed for n={n - 3} does not percolate")
    last = sub.shape.decode(int(np.flatnonzero(last_infected(rec))[0]))

    def place(word):
        # transposition 0 <-> last[i] per coordinate, then append the 000 suffix
        return tuple(0 if d == l else (l if d == 0 else d) for d, l in zip(word, last)) + (0, 0, 0)

    seed = sub.remap(shape, place)
    seed.pieces.append((f"link n={n}", (shape.encode((0,) * (n - 3) + (1, 1, 0)),)))
    seed.pieces.append((f"apex n={n}", (shape.encode((2,) * n),)))
    return seed


def lift_seed(seed: ExtremalSeed, max_vertices: int | None = None) -> ExtremalSeed:
    """Cylinder over ``seed``: every vertex extended by each last symbol."""
    old = seed.shape
    shape = CubeShape(old.n + 1, old.q, max_vertices or old.max_vertices)
    pieces = []
    for label, codes in seed.pieces:
        lifted = sorted(c * old.q + s for c in codes for s in range(old.q))
        pieces.append((f"lift of {label}", tuple(lifted)))
    return ExtremalSeed(shape, pieces)
