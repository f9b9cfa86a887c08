"""Verification suites: each one checks a family of statements by simulation.

Every suite returns a list of :class:`CheckResult`, one per item (a shape,
a lemma configuration, ...), carrying the number of cases checked and the
first counterexample on failure.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from . import algebra, engine, extremal, norms, oracle
from .errors import OutOfRangeError
from .hamming_core import (
    CubeShape,
    all_patterns,
    format_set,
    join,
    pattern_distance,
)

SUITES = (
    "st1", "st2", "st3", "st4", "st5", "st6",
    "lemma3", "lemma4", "lemma5", "lemma6", "lemma13",
    "formula", "monotonicity", "oracle",
)


@dataclass
class CheckResult:
    suite: str
    item: str
    passed: bool
    cases: int
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Options:
    q: int = 3
    max_n: int | None = None
    k: int | None = None
    l: int | None = None
    samples: int = 200
    rng_seed: int = 0


# ---------------------------------------------------------------- lemma sets


def check_lemma_config(cfg: norms.LemmaConfig) -> CheckResult:
    """Compare the predicted sets of one configuration with a simulation."""
    rec = engine.run(norms.initial_seed(cfg), cfg.shape)
    lower = cfg.lemma_id in norms.LOWER_IDS
    tail = ",".join(str(s) for s in cfg.tail)
    item = f"{cfg.lemma_id} q={cfg.q} k={cfg.k} l={cfg.l}" + (f" tail={tail}" if tail else "")
    cases = 0
    # A_t is constant from rounds on, so rounds + 1 covers every distinct state
    for t in range(0, rec.rounds + 2):
        try:
            predicted = norms.predicted_lower(cfg, t) if lower else norms.predicted_excluded(cfg, t)
        except OutOfRangeError:
            continue
        cases += 1
        at = rec.infected_by(t)
        wrong = predicted & ~at if lower else predicted & at
        if wrong.any():
            return CheckResult(
                cfg.lemma_id.lower(), item, False, cases,
                {"t": t, "vertices": format_set(wrong, cfg.shape)},
            )
    return CheckResult(cfg.lemma_id.lower(), item, True, cases)


def suite_st(lemma_id: str, opts: Options) -> list[CheckResult]:
    ks = [opts.k] if opts.k is not None else range(3)
    ls = [opts.l] if opts.l is not None else range(3)
    out = []
    for k in ks:
        for l in ls:
            for cfg in norms.lemma_configs(lemma_id, k, l, opts.q):
                out.append(check_lemma_config(cfg))
    return out


# ---------------------------------------------------------------- two subcubes


def two_cube_pairs(shape: CubeShape):
    """Unordered pattern pairs with distance <= 2 and both dims below the join's."""
    pats = list(all_patterns(shape))
    for x, y in itertools.combinations(pats, 2):
        if pattern_distance(x, y) > 2:
            continue
        z = join(x, y)
        if x.dim < z.dim and y.dim < z.dim:
            yield x, y, z


def _pair_suite(name: str, opts: Options, check) -> list[CheckResult]:
    max_n = opts.max_n if opts.max_n is not None else 3
    out = []
    for n in range(1, max_n + 1):
        shape = CubeShape(n, opts.q)
        masks = {}
        cases = 0
        bad = None
        for x, y, z in two_cube_pairs(shape):
            for p in (x, y, z):
                if p not in masks:
                    masks[p] = p.mask(shape)
            rec = engine.run(masks[x] | masks[y], shape)
            cases += 1
            problem = check(x, y, z, rec, masks)
            if problem is not None:
                bad = {"x": str(x), "y": str(y), **problem}
                break
        out.append(CheckResult(name, f"q={opts.q} n={n}", bad is None, cases, bad))
    return out


def suite_lemma13(opts: Options) -> list[CheckResult]:
    def check(x, y, z, rec, masks):
        want = algebra.two_cube_time(x, y)
        if rec.rounds != want:
            return {"simulated": rec.rounds, "formula": want}
        return None

    return _pair_suite("lemma13", opts, check)


def suite_lemma3(opts: Options) -> list[CheckResult]:
    def check(x, y, z, rec, masks):
        if not np.array_equal(rec.final, masks[z]):
            return {"join": str(z), "closure_size": int(rec.final.sum())}
        return None

    return _pair_suite("lemma3", opts, check)


# ---------------------------------------------------------------- closed sets


def all_subsets(shape: CubeShape):
    """Every vertex subset of a tiny cube as a bitmap, in binary-counter order."""
    size = shape.size
    for bits in range(2**size):
        yield np.array([(bits >> v) & 1 for v in range(size)], dtype=bool)


def suite_lemma4(opts: Options) -> list[CheckResult]:
    n = opts.max_n if opts.max_n is not None else 2
    shape = CubeShape(n, opts.q)
    if shape.size > 16:
        raise ValueError("lemma4 enumerates all subsets; needs q^n <= 16")
    item = f"q={opts.q} n={n}"
    equiv = decomp = size_bound = 0
    fails = {}
    for s in all_subsets(shape):
        closed = algebra.is_closed(s, shape)
        fixed = np.array_equal(engine.closure(s, shape), s)
        equiv += 1
        if closed != fixed:
            fails.setdefault("closed-equivalence", {"seed": format_set(s, shape)})
        if closed:
            dec = algebra.decompose_closed(s, shape)
            decomp += 1
            if not dec.valid:
                fails.setdefault("decomposition", {"seed": format_set(s, shape)})
        final = engine.closure(s, shape)
        if final.any():
            dec = algebra.decompose_closed(final, shape)
            if len(dec.components) == 1:
                size_bound += 1
                dim = dec.components[0].dim
                if s.sum() < dim / 2 + 1:
                    fails.setdefault("size-bound", {"seed": format_set(s, shape), "dim": dim})
    return [
        CheckResult("lemma4", f"{item} closed-equivalence", "closed-equivalence" not in fails,
                    equiv, fails.get("closed-equivalence")),
        CheckResult("lemma4", f"{item} decomposition", "decomposition" not in fails,
                    decomp, fails.get("decomposition")),
        CheckResult("lemma4", f"{item} size-bound", "size-bound" not in fails,
                    size_bound, fails.get("size-bound")),
    ]


# ---------------------------------------------------------------- spanning structure


def random_percolating_seed(shape: CubeShape, rng: np.random.Generator) -> np.ndarray:
    """A random spanning seed, thinned towards minimality by random deletions."""
    while True:
        density = rng.uniform(0.05, 0.5)
        seed = rng.random(shape.size) < density
        if engine.run(seed, shape).percolated:
            break
    keep_going = rng.uniform(0.3, 1.0)
    for v in rng.permutation(np.flatnonzero(seed)):
        if rng.random() > keep_going:
            continue
        seed[v] = False
        if not engine.run(seed, shape).percolated:
            seed[v] = True
    return seed


def suite_lemma5(opts: Options) -> list[CheckResult]:
    ns = [opts.max_n] if opts.max_n is not None else [3, 4]
    out = []
    for n in ns:
        shape = CubeShape(n, opts.q)
        rng = np.random.default_rng(opts.rng_seed)
        bad = None
        for _ in range(opts.samples):
            seed = random_percolating_seed(shape, rng)
            found = algebra.spanned_dim_scan(seed, shape)
            missing = algebra.lemma5_violations(found, n)
            if missing:
                bad = {"seed": format_set(seed, shape), "k": missing, "dims": sorted(found)}
                break
        out.append(CheckResult("lemma5", f"q={opts.q} n={n}", bad is None, opts.samples, bad))
    return out


def suite_lemma6(opts: Options) -> list[CheckResult]:
    n = opts.max_n if opts.max_n is not None else 2
    shape = CubeShape(n, opts.q)
    if shape.size <= 12:
        seeds = (s for s in all_subsets(shape) if engine.run(s, shape).percolated)
        label = "exhaustive"
    else:
        rng = np.random.default_rng(opts.rng_seed)
        seeds = (random_percolating_seed(shape, rng) for _ in range(opts.samples))
        label = f"{opts.samples} samples"
    cases = 0
    bad = None
    for seed in seeds:
        cases += 1
        w = algebra.find_span_witness(seed, shape)
        problems = ["not found"] if w is None else algebra.witness_problems(w, seed, shape)
        if problems:
            bad = {"seed": format_set(seed, shape), "problems": problems}
            break
    return [CheckResult("lemma6", f"q={opts.q} n={n} {label}", bad is None, cases, bad)]


# ---------------------------------------------------------------- M_q(n)


def suite_formula(opts: Options) -> list[CheckResult]:
    max_n = opts.max_n if opts.max_n is not None else 6
    out = []
    for n in range(max_n + 1):
        seed = extremal.build_extremal_seed(opts.q, n)
        got = engine.percolation_time(seed.vertices, seed.shape)
        want = extremal.max_time_formula(opts.q, n)
        rec = extremal.max_time_recursive(opts.q, n)
        ok = got == want == rec
        out.append(CheckResult(
            "formula", f"q={opts.q} n={n}", ok, 1,
            None if ok else {"simulated": got, "closed_form": want, "recursion": rec},
        ))
    return out


def suite_monotonicity(opts: Options) -> list[CheckResult]:
    max_n = opts.max_n if opts.max_n is not None else 5
    values = [extremal.max_time_formula(opts.q, n) for n in range(max(max_n, 30) + 2)]
    drops = [n for n in range(len(values) - 1) if values[n] > values[n + 1]]
    out = [CheckResult(
        "monotonicity", f"q={opts.q} formula n<={len(values) - 1}", not drops,
        len(values) - 1, {"n": drops[0]} if drops else None,
    )]
    for n in range(max_n):
        seed = extremal.build_extremal_seed(opts.q, n)
        before = engine.percolation_time(seed.vertices, seed.shape)
        lifted = extremal.lift_seed(seed)
        after = engine.percolation_time(lifted.vertices, lifted.shape)
        ok = before == after
        out.append(CheckResult(
            "monotonicity", f"q={opts.q} lift n={n}->{n + 1}", ok, 1,
            None if ok else {"before": before, "after": after},
        ))
    return out


def suite_oracle(opts: Options) -> list[CheckResult]:
    out = []
    n = 0
    while opts.q**n <= oracle.EXHAUSTIVE_LIMIT:
        shape = CubeShape(n, opts.q)
        full = oracle.max_time_exhaustive(shape)
        minimal = oracle.max_time_exhaustive(shape, minimal_only=True)
        want = extremal.max_time_formula(opts.q, n)
        problem = None
        if not full.max_time == minimal.max_time == want:
            problem = {"full": full.max_time, "minimal": minimal.max_time, "formula": want}
        for combo in full.witnesses:
            rec = engine.run(list(combo), shape)
            if not rec.percolated or rec.rounds != full.max_time:
                problem = problem or {"witness": [shape.format_vertex(v) for v in combo]}
        out.append(CheckResult("oracle", f"q={opts.q} n={n}", problem is None,
                               full.seeds_examined, problem))
        n += 1
    return out


def run_suite(name: str, opts: Options) -> list[CheckResult]:
    if name == "all":
        results = []
        for sub in SUITES:
            results.extend(run_suite(sub, opts))
        return results
    if name not in SUITES:
        raise KeyError(name)
    if name.startswith("st"):
        return suite_st(name.upper(), opts)
    table = {
        "lemma3": suite_lemma3,
        "lemma4": suite_lemma4,
        "lemma5": suite_lemma5,
        "lemma6": suite_lemma6,
        "lemma13": suite_lemma13,
        "formula": suite_formula,
        "monotonicity": suite_monotonicity,
        "oracle": suite_oracle,
    }
    return table[name](opts)
