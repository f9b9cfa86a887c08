"""Structural predicates for 2-neighbour percolation on Q_{n,q}.

Closed sets, their decomposition into far-apart subcubes, internally spanned
subcubes, nested spanning chains and the exact infection time of a union of
two subcubes.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .errors import NotPercolatingError, ResourceGuardError
from .hamming_core import (
    STAR,
    CubeShape,
    Pattern,
    all_patterns,
    as_mask,
    join,
    pattern_distance,
    shared_stars,
    subcube_count,
)

WITNESS_GUARD = 10**5


@dataclass(frozen=True)
class ClosedDecomposition:
    components: list[Pattern]
    valid: bool


@dataclass(frozen=True)
class SpanWitness:
    """Nested chain of internally spanned subcubes ending at the full cube.

    ``mergers[j]`` is the subcube that joins ``chain[j]`` into ``chain[j + 1]``.
    """

    chain: list[Pattern]
    mergers: list[Pattern] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [p.dim for p in self.chain]


def is_closed(s, shape: CubeShape) -> bool:
    """True iff no vertex outside ``s`` has two or more neighbours in ``s``."""
    s = as_mask(s, shape)
    counts = s[shape.neighbor_table()].sum(axis=1)
    return not bool(((~s) & (counts >= 2)).any())


def _grow(word: list[int], s: np.ndarray, q: int) -> Pattern:
    changed = True
    while changed:
        changed = False
        for i, sym in enumerate(word):
            if sym == STAR:
                continue
            trial = word.copy()
            trial[i] = STAR
            if s[Pattern(trial, q).members()].all():
                word = trial
                changed = True
    return Pattern(word, q)


def decompose_closed(s, shape: CubeShape) -> ClosedDecomposition:
    """Split a closed set into maximal subcubes.

    ``valid`` reports whether the pieces are disjoint, cover ``s`` and are
    pairwise at distance >= 3; a False here means the set theory above was
    violated, which callers should treat as a bug.
    """
    s = as_mask(s, shape)
    if not is_closed(s, shape):
        raise ValueError("decompose_closed needs a closed set")
    covered = shape.empty_set()
    components = []
    disjoint = True
    for v in np.flatnonzero(s):
        if covered[v]:
            continue
        comp = _grow(list(shape.decode(int(v))), s, shape.q)
        members = comp.members()
        disjoint &= not covered[members].any()
        covered[members] = True
        components.append(comp)
    far = all(pattern_distance(x, y) >= 3 for x, y in itertools.combinations(components, 2))
    valid = bool(disjoint and far and np.array_equal(covered, s))
    return ClosedDecomposition(components, valid)


def is_internally_spanned(seed, x: Pattern, shape: CubeShape) -> bool:
    seed = as_mask(seed, shape)
    cube = x.mask(shape)
    inside = seed & cube
    if not inside.any():
        return False
    # closure of a subset of Q^x never leaves Q^x, so the ambient run is exact
    return bool(np.array_equal(engine.closure(inside, shape), cube))


def _require_percolating(seed: np.ndarray, shape: CubeShape) -> None:
    if not engine.run(seed, shape).percolated:
        raise NotPercolatingError("seed does not span the cube")


def spanned_dim_scan(seed, shape: CubeShape) -> set[int]:
    """Dimensions l for which some dimension-l subcube is internally spanned."""
    seed = as_mask(seed, shape)
    _require_percolating(seed, shape)
    found = set()
    for dim in range(shape.n + 1):
        if any(is_internally_spanned(seed, x, shape) for x in all_patterns(shape, dim)):
            found.add(dim)
    return found


def lemma5_violations(found: set[int], n: int) -> list[int]:
    """The k <= n with no spanned dimension l in [k, 2k]."""
    return [k for k in range(n + 1) if not any(k <= l <= 2 * k for l in found)]


def find_span_witness(seed, shape: CubeShape, guard: int = WITNESS_GUARD) -> SpanWitness | None:
    """Search for a nested chain Q_0 = X_1 < X_2 < ... < X_t = Q_{n,q}.

    Each step X_{j+1} = X_j v Z_j with Z_j internally spanned, dim Z_j <= dim X_j
    and d(X_j, Z_j) <= 2.  Subcubes are visited smallest dimension first.
    Returns None (with a RuntimeWarning) if no chain exists.
    """
    seed = as_mask(seed, shape)
    if subcube_count(shape) > guard:
        raise ResourceGuardError(
            f"witness search over {subcube_count(shape)} subcubes exceeds guard {guard}",
            estimate=subcube_count(shape),
            limit=guard,
        )
    _require_percolating(seed, shape)

    spanned = sorted(
        (x for x in all_patterns(shape) if is_internally_spanned(seed, x, shape)),
        key=lambda p: (p.dim, p.symbols),
    )
    spanned_set = set(spanned)
    parent: dict[Pattern, tuple[Pattern, Pattern] | None] = {
        x: None for x in spanned if x.dim == 0
    }
    for x in spanned:
        if x not in parent:
            continue
        for z in spanned:
            if z.dim > x.dim:
                break
            if pattern_distance(x, z) > 2:
                continue
            y = join(x, z)
            if y.dim > x.dim and y in spanned_set and y not in parent:
                parent[y] = (x, z)

    full = Pattern.full(shape)
    if full not in parent:
        warnings.warn(f"no nested spanning chain found for a percolating seed on {shape}", RuntimeWarning)
        return None
    chain, mergers = [full], []
    node = full
    while parent[node] is not None:
        node, z = parent[node]
        chain.append(node)
        mergers.append(z)
    return SpanWitness(chain[::-1], mergers[::-1])


def witness_problems(w: SpanWitness, seed, shape: CubeShape) -> list[str]:
    """Reasons ``w`` fails to be a valid chain for ``seed``; empty if it is valid."""
    seed = as_mask(seed, shape)
    problems = []
    if w.chain[0].dim != 0:
        problems.append(f"chain starts at dimension {w.chain[0].dim}")
    if w.chain[-1] != Pattern.full(shape):
        problems.append(f"chain ends at {w.chain[-1]}")
    if len(w.mergers) != len(w.chain) - 1:
        problems.append("merger count does not match chain length")
    for x in w.chain + w.mergers:
        if not is_internally_spanned(seed, x, shape):
            problems.append(f"{x} is not internally spanned")
    for x, y, z in zip(w.chain, w.chain[1:], w.mergers):
        if not 2 * x.dim + 2 >= y.dim:
            problems.append(f"dimension jump {x.dim} -> {y.dim}")
        if z.dim > x.dim:
            problems.append(f"merger {z} larger than {x}")
        if not np.array_equal(engine.closure(x.mask(shape) | z.mask(shape), shape), y.mask(shape)):
            problems.append(f"{x} and {z} do not span {y}")
    return problems


def two_cube_time(x: Pattern, y: Pattern) -> int:
    """Exact percolation time of Q^x U Q^y inside Q^{x v y}.

    With m = dim(x v y) and p the number of coordinates starred in both, the
    time is m - p - 1, m - p or m - p + 1 for distance 0, 1 or 2.
    """
    d = pattern_distance(x, y)
    if d > 2:
        raise ValueError(f"distance {d} between {x} and {y} exceeds 2")
    m = join(x, y).dim
    if not (x.dim < m and y.dim < m):
        raise ValueError(f"need dim({x}), dim({y}) < dim of their join ({m})")
    return m - shared_stars(x, y) - 1 + d
