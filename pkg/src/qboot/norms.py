"""Gated nonzero-count norms and the infected / excluded vertex sets they describe.

The norm family counts nonzero digits of a vertex, but only when every
present gate passes:

* block 1 (the first ``n1`` digits) contains a nonzero digit,
* block 2 (the next ``n2`` digits) contains a nonzero digit,
* the last ``d`` digits equal the required suffix.

The count runs over the first ``n - d`` digits.  Leaving ``n1``/``n2``
absent or the suffix empty yields the simpler members of the family.

Six two-subcube seeds S U T are studied (ST1..ST6).  ST1-ST3 come with a
lower bound on A_t (:func:`predicted_lower`), ST4-ST6 with a set that must
stay healthy at step t (:func:`predicted_excluded`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRangeError
from .hamming_core import STAR, CubeShape, Pattern

LOWER_IDS = ("ST1", "ST2", "ST3")
EXCLUDED_IDS = ("ST4", "ST5", "ST6")
LEMMA_IDS = LOWER_IDS + EXCLUDED_IDS


@dataclass(frozen=True)
class NormSpec:
    shape: CubeShape
    n1: int | None = None
    n2: int | None = None
    suffix: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "suffix", tuple(int(a) for a in self.suffix))
        for name in ("n1", "n2"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ValueError(f"{name} must be nonnegative, got {val}")
        if self.n2 is not None and self.n1 is None:
            raise ValueError("n2 given without n1")
        need = len(self.suffix) + (self.n1 or 0) + (self.n2 or 0)
        if self.shape.n < need:
            raise ValueError(f"n={self.shape.n} is below d + n1 + n2 = {need}")
        for a in self.suffix:
            if not 0 <= a < self.shape.q:
                raise ValueError(f"suffix symbol {a} invalid for q={self.shape.q}")

    @property
    def d(self) -> int:
        return len(self.suffix)


def norm(x: int, spec: NormSpec) -> int:
    digits = spec.shape.decode(x)
    n, d = spec.shape.n, spec.d
    if spec.n1 is not None and not any(digits[: spec.n1]):
        return 0
    if spec.n2 is not None and not any(digits[spec.n1 : spec.n1 + spec.n2]):
        return 0
    if tuple(digits[n - d :]) != spec.suffix:
        return 0
    return sum(1 for v in digits[: n - d] if v)


def norm_values(spec: NormSpec) -> np.ndarray:
    """``norm`` evaluated on every vertex, indexed by code."""
    digits = spec.shape.digits()
    n, d = spec.shape.n, spec.d
    nz = digits != 0
    out = nz[:, : n - d].sum(axis=1)
    ok = np.ones(spec.shape.size, dtype=bool)
    if spec.n1 is not None:
        ok &= nz[:, : spec.n1].any(axis=1)
    if spec.n2 is not None:
        ok &= nz[:, spec.n1 : spec.n1 + spec.n2].any(axis=1)
    if d:
        ok &= (digits[:, n - d :] == np.array(spec.suffix)[None, :]).all(axis=1)
    return np.where(ok, out, 0)


@dataclass(frozen=True)
class LemmaConfig:
    """One of the six two-subcube configurations.

    ``i`` is the trailing symbol for ST2/ST5, ``a`` and ``b`` the two
    trailing symbols for ST3/ST6.  The ambient dimension is k + l plus the
    number of trailing symbols.
    """

    lemma_id: str
    k: int
    l: int
    q: int
    i: int | None = None
    a: int | None = None
    b: int | None = None
    shape: CubeShape = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.lemma_id not in LEMMA_IDS:
            raise ValueError(f"unknown lemma id {self.lemma_id!r}")
        if self.k < 0 or self.l < 0:
            raise ValueError("k and l must be nonnegative")
        tail = self.tail
        expected = {1: (self.i,), 2: (self.a, self.b)}.get(len(tail), ())
        for sym in expected:
            if sym is None or not 0 < sym < self.q:
                raise ValueError(f"{self.lemma_id} needs nonzero trailing symbols below q, got {tail}")
        object.__setattr__(self, "shape", CubeShape(self.k + self.l + len(tail), self.q))

    @property
    def family(self) -> int:
        """1, 2 or 3: the number of the S/T layout (ST1/ST4, ST2/ST5, ST3/ST6)."""
        return (LEMMA_IDS.index(self.lemma_id) % 3) + 1

    @property
    def tail(self) -> tuple:
        return {1: (), 2: (self.i,), 3: (self.a, self.b)}[self.family]


def initial_sets(cfg: LemmaConfig) -> tuple[Pattern, Pattern]:
    k, l, q = cfg.k, cfg.l, cfg.q
    tail = cfg.tail
    s = (STAR,) * k + (0,) * (l + len(tail))
    t = (0,) * k + (STAR,) * l + tuple(tail)
    return Pattern(s, q), Pattern(t, q)


def initial_seed(cfg: LemmaConfig) -> np.ndarray:
    s, t = initial_sets(cfg)
    return s.mask(cfg.shape) | t.mask(cfg.shape)


def _band(spec: NormSpec, lo: int, hi: int) -> np.ndarray:
    vals = norm_values(spec)
    return (vals >= lo) & (vals <= hi)


def _at_least(spec: NormSpec, lo: int) -> np.ndarray:
    return norm_values(spec) >= lo


def _line(cfg: LemmaConfig, tail: tuple) -> np.ndarray:
    """Members of [0]^{k+l} followed by ``tail`` (symbols or stars)."""
    word = (0,) * (cfg.k + cfg.l) + tuple(tail)
    return Pattern(word, cfg.q).mask(cfg.shape)


def predicted_lower(cfg: LemmaConfig, t: int) -> np.ndarray:
    """Vertices guaranteed infected by step ``t`` from S U T (ST1-ST3)."""
    shape, q = cfg.shape, cfg.q
    if cfg.lemma_id == "ST1":
        if t < 0:
            raise OutOfRangeError(f"ST1 makes claims for t >= 0, got {t}")
        return norm_values(NormSpec(shape)) <= t + 1

    if cfg.lemma_id == "ST2":
        if t < 1:
            raise OutOfRangeError(f"ST2 makes claims for t >= 1, got {t}")
        out = _line(cfg, (STAR,))
        for j in range(q):
            hi = t if j in (0, cfg.i) else t - 1
            out |= _band(NormSpec(shape, suffix=(j,)), 1, hi)
        return out

    if cfg.lemma_id == "ST3":
        if t < 1:
            raise OutOfRangeError(f"ST3 makes claims for t >= 1, got {t}")
        a, b = cfg.a, cfg.b
        if t == 1:
            out = shape.empty_set()
            for tail in ((0, b), (a, 0), (a, b), (0, 0)):
                out |= _line(cfg, tail)
            return out
        if t == 2:
            out = shape.empty_set()
            for tail in ((0, STAR), (a, STAR), (STAR, 0), (STAR, b)):
                out |= _line(cfg, tail)
        else:
            out = _line(cfg, (STAR, STAR))
        for c in range(q):
            for e in range(q):
                out |= _band(NormSpec(shape, suffix=(c, e)), 1, t - _st3_lag(c, e, a, b))
        return out

    raise ValueError(f"{cfg.lemma_id} has no lower-bound statement; use one of {LOWER_IDS}")


def _st3_lag(c: int, e: int, a: int, b: int) -> int:
    """How far behind t the ST3 band for trailing pair (c, e) runs."""
    if (c, e) in ((0, b), (a, 0)):
        return 1
    if c == 0 or e == 0 or c == a or e == b:
        return 2
    return 3


def excluded_range(cfg: LemmaConfig) -> tuple[int, int | None] | None:
    """(first, last) t with some applicable branch; last None means unbounded.

    Returns None when no t qualifies (e.g. ST4 with k + l < 2).
    """
    k, l = cfg.k, cfg.l
    if cfg.lemma_id == "ST4":
        return (0, k + l - 2) if k + l >= 2 else None
    if cfg.lemma_id == "ST5":
        return (0, k + l) if k + l >= 1 else None
    if cfg.lemma_id == "ST6":
        return 1, None
    raise ValueError(f"{cfg.lemma_id} has no exclusion statement; use one of {EXCLUDED_IDS}")


def excluded_branches(cfg: LemmaConfig, t: int) -> dict[str, np.ndarray]:
    """The separate exclusion statements that apply at step ``t``, keyed by label.

    Each branch shrinks as t grows; their union need not, because further
    branches start to apply at larger t.
    """
    shape, q, k, l = cfg.shape, cfg.q, cfg.k, cfg.l

    if cfg.lemma_id == "ST4":
        if not 0 <= t <= k + l - 2:
            raise OutOfRangeError(f"ST4 makes claims for 0 <= t <= {k + l - 2}, got {t}")
        return {"blocks": _at_least(NormSpec(shape, n1=k, n2=l), t + 2)}

    if cfg.lemma_id == "ST5":
        first = 0 <= t <= k + l - 1
        second = 1 <= t <= k + l
        if not (first or second):
            raise OutOfRangeError(
                f"ST5 makes claims for 0 <= t <= {k + l - 1} or 1 <= t <= {k + l}, got {t}"
            )
        out = {}
        if first:
            out[f"suffix {cfg.i}"] = _at_least(NormSpec(shape, n1=k, suffix=(cfg.i,)), t + 1)
        if second:
            for j in range(1, q):
                if j != cfg.i:
                    out[f"suffix {j}"] = _at_least(NormSpec(shape, n1=k, suffix=(j,)), t)
        return out

    if cfg.lemma_id == "ST6":
        if t < 1:
            raise OutOfRangeError(f"ST6 makes claims for t >= 1, got {t}")
        a, b = cfg.a, cfg.b
        out = {}

        def add(c, e, lo):
            out[f"suffix {c}{e}" if q <= 10 else f"suffix {c},{e}"] = _at_least(
                NormSpec(shape, n1=k, suffix=(c, e)), lo
            )

        add(0, b, t)
        add(a, 0, t)
        if t >= 2:
            for j in range(1, q):
                if j != b:
                    add(0, j, t - 1)
                add(a, j, t - 1)
            for i in range(1, q):
                if i != a:
                    add(i, 0, t - 1)
                add(i, b, t - 1)
        if t >= 3:
            for i in range(1, q):
                for j in range(1, q):
                    if i != a and j != b:
                        add(i, j, t - 2)
        return out

    raise ValueError(f"{cfg.lemma_id} has no exclusion statement; use one of {EXCLUDED_IDS}")


def predicted_excluded(cfg: LemmaConfig, t: int) -> np.ndarray:
    """Vertices proven healthy at step ``t`` from S U T (ST4-ST6)."""
    out = cfg.shape.empty_set()
    for mask in excluded_branches(cfg, t).values():
        out |= mask
    return out


def lemma_configs(lemma_id: str, k: int, l: int, q: int) -> list[LemmaConfig]:
    """Every valid choice of trailing symbols for one (lemma, k, l, q)."""
    family = (LEMMA_IDS.index(lemma_id) % 3) + 1
    if family == 1:
        return [LemmaConfig(lemma_id, k, l, q)]
    if family == 2:
        return [LemmaConfig(lemma_id, k, l, q, i=i) for i in range(1, q)]
    return [LemmaConfig(lemma_id, k, l, q, a=a, b=b) for a in range(1, q) for b in range(1, q)]
