"""Vertices and subcubes of the q-ary hypercube Q_{n,q}.

A vertex is an ``int`` code in ``[0, q**n)``: the mixed-radix number whose
base-q digits are ``x_1 .. x_n`` with ``x_1`` most significant.  Codes
ascend in lexicographic order of the digit words, so sorted code arrays are
also lexicographically sorted words.

A subcube is a :class:`Pattern`, a word over ``{0..q-1} U {*}``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ResourceGuardError, ShapeMismatchError

DEFAULT_MAX_VERTICES = 2**27
STAR = -1


@dataclass(frozen=True)
class CubeShape:
    """The ambient cube Q_{n,q}."""

    n: int
    q: int
    max_vertices: int = field(default=DEFAULT_MAX_VERTICES, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError(f"dimension n must be a nonnegative integer, got {self.n!r}")
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise ValueError(f"alphabet size q must be an integer >= 2, got {self.q!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "q", int(self.q))
        if self.q**self.n > self.max_vertices:
            raise ResourceGuardError(
                f"Q_{{{self.n},{self.q}}} has {self.q**self.n} vertices, "
                f"over the memory guard of {self.max_vertices}",
                estimate=self.q**self.n,
                limit=self.max_vertices,
            )

    @property
    def size(self) -> int:
        return self.q**self.n

    @property
    def degree(self) -> int:
        return self.n * (self.q - 1)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(self.q ** (self.n - 1 - i) for i in range(self.n))

    def encode(self, digits: Sequence[int]) -> int:
        if len(digits) != self.n:
            raise ShapeMismatchError(f"expected {self.n} digits, got {len(digits)}")
        code = 0
        for d in digits:
            if not 0 <= d < self.q:
                raise ValueError(f"digit {d} out of range for q={self.q}")
            code = code * self.q + int(d)
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        self.check_vertex(code)
        out = []
        for _ in range(self.n):
            code, d = divmod(code, self.q)
            out.append(d)
        return tuple(reversed(out))

    def check_vertex(self, code: int) -> None:
        if not 0 <= code < self.size:
            raise ValueError(f"vertex code {code} out of range for Q_{{{self.n},{self.q}}}")

    def format_vertex(self, code: int) -> str:
        return format_word(self.decode(code), self.q)

    def parse_vertex(self, text: str) -> int:
        word = parse_word(text, self.q)
        if STAR in word:
            raise ValueError(f"vertex {text!r} contains a star")
        return self.encode(word)

    def digits(self) -> np.ndarray:
        """(q**n, n) read-only table of digits, row ``v`` holds the word of ``v``."""
        return _digit_table(self.n, self.q)

    def neighbor_table(self) -> np.ndarray:
        """(q**n, n(q-1)) read-only table of neighbour codes in canonical order."""
        return _neighbor_table(self.n, self.q)

    def empty_set(self) -> np.ndarray:
        return np.zeros(self.size, dtype=bool)

    def full_set(self) -> np.ndarray:
        return np.ones(self.size, dtype=bool)


@functools.lru_cache(maxsize=64)
def _digit_table(n: int, q: int) -> np.ndarray:
    codes = np.arange(q**n, dtype=np.int64)
    table = np.empty((q**n, n), dtype=np.int64)
    for i in range(n):
        table[:, i] = (codes // q ** (n - 1 - i)) % q
    table.flags.writeable = False
    return table


@functools.lru_cache(maxsize=64)
def _neighbor_table(n: int, q: int) -> np.ndarray:
    digits = _digit_table(n, q)
    codes = np.arange(q**n, dtype=np.int64)
    table = np.empty((q**n, n * (q - 1)), dtype=np.int64)
    # offsets 1..q-1 from the own symbol, sorted per row to get symbol-ascending order
    shifts = np.arange(1, q, dtype=np.int64)
    for i in range(n):
        w = q ** (n - 1 - i)
        own = digits[:, i][:, None]
        other = np.sort((own + shifts[None, :]) % q, axis=1)
        table[:, i * (q - 1) : (i + 1) * (q - 1)] = codes[:, None] + (other - own) * w
    table.flags.writeable = False
    return table


def format_word(word: Sequence[int], q: int) -> str:
    """Render digits (and stars) as text: compact for q <= 10, comma-separated above."""
    tokens = ["*" if s == STAR else str(s) for s in word]
    return "".join(tokens) if q <= 10 else ",".join(tokens)


def parse_word(text: str, q: int) -> tuple[int, ...]:
    text = text.strip()
    if "," in text or q > 10:
        tokens = [t.strip() for t in text.split(",")] if text else []
    else:
        tokens = list(text)
    word = []
    for tok in tokens:
        if tok == "*":
            word.append(STAR)
            continue
        if not tok.isdigit():
            raise ValueError(f"bad symbol {tok!r} in {text!r}")
        s = int(tok)
        if s >= q:
            raise ValueError(f"symbol {s} in {text!r} is not below q={q}")
        word.append(s)
    return tuple(word)


@dataclass(frozen=True)
class Pattern:
    """A subcube Q^x given by a word x over {0..q-1, *}."""

    symbols: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        for s in self.symbols:
            if s != STAR and not 0 <= s < self.q:
                raise ValueError(f"pattern symbol {s} invalid for q={self.q}")

    @classmethod
    def parse(cls, text: str, q: int) -> "Pattern":
        return cls(parse_word(text, q), q)

    @classmethod
    def vertex(cls, code: int, shape: CubeShape) -> "Pattern":
        return cls(shape.decode(code), shape.q)

    @classmethod
    def full(cls, shape: CubeShape) -> "Pattern":
        return cls((STAR,) * shape.n, shape.q)

    def __str__(self) -> str:
        return format_word(self.symbols, self.q)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def dim(self) -> int:
        return sum(1 for s in self.symbols if s == STAR)

    @property
    def stars(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.symbols) if s == STAR)

    def shape(self, max_vertices: int = DEFAULT_MAX_VERTICES) -> CubeShape:
        return CubeShape(self.n, self.q, max_vertices)

    def members(self) -> np.ndarray:
        """Sorted codes of Q^x (lexicographic over the star positions)."""
        n, q = self.n, self.q
        base = 0
        for i, s in enumerate(self.symbols):
            if s != STAR:
                base += s * q ** (n - 1 - i)
        codes = np.array([base], dtype=np.int64)
        for i in self.stars:
            w = q ** (n - 1 - i)
            codes = (codes[:, None] + np.arange(q, dtype=np.int64)[None, :] * w).ravel()
        codes.sort()
        return codes

    def mask(self, shape: CubeShape | None = None) -> np.ndarray:
        shape = shape or self.shape()
        _check_same(self, shape)
        out = shape.empty_set()
        out[self.members()] = True
        return out


def _check_same(x: Pattern, other) -> None:
    # other is a Pattern or a CubeShape; both expose n and q
    if x.n != other.n or x.q != other.q:
        raise ShapeMismatchError(
            f"pattern {x} (n={x.n}, q={x.q}) does not match n={other.n}, q={other.q}"
        )


def neighbors(v: int, shape: CubeShape) -> list[int]:
    """The n(q-1) neighbours of ``v``, coordinate-major then symbol-ascending."""
    digits = shape.decode(v)
    out = []
    for i, w in enumerate(shape.weights):
        base = v - digits[i] * w
        out.extend(base + c * w for c in range(shape.q) if c != digits[i])
    return out


def coord_distance(a: int, b: int) -> int:
    return int(a != STAR and b != STAR and a != b)


def pattern_distance(x: Pattern, y: Pattern) -> int:
    _check_same(x, y)
    return sum(coord_distance(a, b) for a, b in zip(x.symbols, y.symbols))


def shared_stars(x: Pattern, y: Pattern) -> int:
    """Number of coordinates starred in both patterns."""
    _check_same(x, y)
    return sum(1 for a, b in zip(x.symbols, y.symbols) if a == STAR and b == STAR)


def join(x: Pattern, y: Pattern) -> Pattern:
    _check_same(x, y)
    return Pattern(tuple(a if a == b else STAR for a, b in zip(x.symbols, y.symbols)), x.q)


def pattern_members(x: Pattern) -> Iterator[int]:
    yield from (int(c) for c in x.members())


def contains(x: Pattern, v: int) -> bool:
    shape = x.shape()
    return all(s == STAR or s == d for s, d in zip(x.symbols, shape.decode(v)))


def is_subpattern(x: Pattern, y: Pattern) -> bool:
    """True iff Q^x is contained in Q^y."""
    _check_same(x, y)
    return all(b == STAR or a == b for a, b in zip(x.symbols, y.symbols))


def all_patterns(shape: CubeShape, dim: int | None = None) -> Iterator[Pattern]:
    """Every subcube of ``shape``, optionally only those of one dimension."""
    alphabet = [STAR] + list(range(shape.q))
    for word in itertools.product(alphabet, repeat=shape.n):
        if dim is None or word.count(STAR) == dim:
            yield Pattern(word, shape.q)


def subcube_count(shape: CubeShape) -> int:
    return (shape.q + 1) ** shape.n


def as_mask(vertices, shape: CubeShape) -> np.ndarray:
    """Coerce a vertex collection to a boolean bitmap over ``shape``.

    Accepts a bitmap of length q**n, or an iterable of int codes and/or
    digit strings.
    """
    if isinstance(vertices, np.ndarray) and vertices.dtype == bool:
        if vertices.shape != (shape.size,):
            raise ShapeMismatchError(
                f"bitmap of length {vertices.shape} does not match {shape.size} vertices"
            )
        return vertices
    out = shape.empty_set()
    codes = []
    for v in vertices:
        if isinstance(v, str):
            v = shape.parse_vertex(v)
        v = int(v)
        shape.check_vertex(v)
        codes.append(v)
    out[codes] = True
    return out


def mask_to_codes(mask: np.ndarray) -> list[int]:
    return [int(c) for c in np.flatnonzero(mask)]


def format_set(mask: np.ndarray, shape: CubeShape) -> list[str]:
    return [shape.format_vertex(c) for c in np.flatnonzero(mask)]


def parse_vertex_list(text: str, shape: CubeShape) -> list[int]:
    """Parse a seed list: comma-separated for q <= 10, semicolon-separated above."""
    sep = "," if shape.q <= 10 else ";"
    return [shape.parse_vertex(tok) for tok in text.split(sep) if tok.strip() or shape.n == 0]


def relabel_codes(codes: Iterable[int], shape: CubeShape, maps: Sequence[Sequence[int]]) -> list[int]:
    """Apply a per-coordinate symbol bijection ``maps[i][old] = new`` to vertex codes."""
    out = []
    for c in codes:
        word = shape.decode(int(c))
        out.append(shape.encode([maps[i][d] for i, d in enumerate(word)]))
    return out


def permute_codes(codes: Iterable[int], shape: CubeShape, perm: Sequence[int]) -> list[int]:
    """Move coordinate ``perm[i]`` of each vertex to position ``i``."""
    out = []
    for c in codes:
        word = shape.decode(int(c))
        out.append(shape.encode([word[p] for p in perm]))
    return out
