import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qboot.engine import run
from qboot.errors import OutOfRangeError
from qboot.hamming_core import CubeShape, format_set
from qboot.norms import (
    EXCLUDED_IDS,
    LEMMA_IDS,
    LOWER_IDS,
    LemmaConfig,
    NormSpec,
    excluded_branches,
    excluded_range,
    initial_seed,
    initial_sets,
    lemma_configs,
    norm,
    norm_values,
    predicted_excluded,
    predicted_lower,
)


def literal_norm(word, n1, n2, suffix):
    """Straight transcription of the gated count, used as an independent reference."""
    n, d = len(word), len(suffix)
    gate = 1
    if n1 is not None:
        gate *= int(any(v != 0 for v in word[:n1]))
    if n2 is not None:
        gate *= int(any(v != 0 for v in word[n1 : n1 + n2]))
    gate *= int(all(word[n - d + j] == suffix[j] for j in range(d)))
    return gate * sum(1 for i in range(n - d) if word[i] != 0)


def as_words(mask, shape):
    return set(format_set(mask, shape))


class TestNorm:
    def test_suffix_counts_prefix_only(self):
        shape = CubeShape(4, 4)
        assert norm(shape.parse_vertex("1203"), NormSpec(shape, suffix=(3,))) == 2

    def test_two_blocks(self):
        shape = CubeShape(4, 3)
        spec = NormSpec(shape, n1=2, n2=2)
        assert norm(shape.parse_vertex("1010"), spec) == 2
        assert norm(shape.parse_vertex("0010"), spec) == 0
        assert norm(shape.parse_vertex("1000"), spec) == 0

    def test_plain_weight(self):
        shape = CubeShape(3, 3)
        assert [norm(shape.parse_vertex(w), NormSpec(shape)) for w in ("000", "102", "212")] == [0, 2, 3]

    def test_suffix_mismatch(self):
        shape = CubeShape(3, 3)
        assert norm(shape.parse_vertex("121"), NormSpec(shape, suffix=(2,))) == 0

    def test_empty_gate_block_fails(self):
        shape = CubeShape(2, 3)
        assert norm(shape.parse_vertex("11"), NormSpec(shape, n1=0)) == 0

    def test_spec_validation(self):
        shape = CubeShape(3, 3)
        with pytest.raises(ValueError):
            NormSpec(shape, n1=2, n2=1, suffix=(1,))
        with pytest.raises(ValueError):
            NormSpec(shape, suffix=(3,))
        with pytest.raises(ValueError):
            NormSpec(shape, n2=1)
        with pytest.raises(ValueError):
            NormSpec(shape, n1=-1)

    @settings(max_examples=150)
    @given(st.integers(2, 4), st.integers(1, 4), st.data())
    def test_matches_literal_definition(self, q, n, data):
        shape = CubeShape(n, q)
        d = data.draw(st.integers(0, n))
        suffix = tuple(data.draw(st.lists(st.integers(0, q - 1), min_size=d, max_size=d)))
        n1 = data.draw(st.one_of(st.none(), st.integers(0, n - d)))
        n2 = None if n1 is None else data.draw(st.one_of(st.none(), st.integers(0, n - d - n1)))
        spec = NormSpec(shape, n1, n2, suffix)
        vals = norm_values(spec)
        for v in range(shape.size):
            word = shape.decode(v)
            want = literal_norm(word, n1, n2, suffix)
            assert norm(v, spec) == vals[v] == want
            if want > 0:
                assert n1 is None or any(word[:n1])
                assert word[n - d :] == suffix


class TestInitialSets:
    @pytest.mark.parametrize(
        "cfg,want",
        [
            (LemmaConfig("ST1", 1, 1, 3), ("*0", "0*")),
            (LemmaConfig("ST3", 0, 0, 3, a=1, b=1), ("00", "11")),
            (LemmaConfig("ST2", 1, 0, 3, i=2), ("*0", "02")),
            (LemmaConfig("ST6", 1, 2, 4, a=3, b=1), ("*0000", "0**31")),
        ],
    )
    def test_patterns(self, cfg, want):
        assert tuple(str(p) for p in initial_sets(cfg)) == want

    def test_dimension(self):
        assert LemmaConfig("ST4", 2, 1, 3).shape.n == 3
        assert LemmaConfig("ST5", 2, 1, 3, i=1).shape.n == 4
        assert LemmaConfig("ST6", 2, 1, 3, a=1, b=2).shape.n == 5

    def test_validation(self):
        with pytest.raises(ValueError):
            LemmaConfig("ST7", 1, 1, 3)
        with pytest.raises(ValueError):
            LemmaConfig("ST2", 1, 1, 3)
        with pytest.raises(ValueError):
            LemmaConfig("ST3", 1, 1, 3, a=0, b=1)
        with pytest.raises(ValueError):
            LemmaConfig("ST5", 1, 1, 3, i=3)

    def test_config_enumeration(self):
        assert len(lemma_configs("ST4", 1, 1, 4)) == 1
        assert len(lemma_configs("ST5", 1, 1, 4)) == 3
        assert len(lemma_configs("ST6", 1, 1, 4)) == 9


class TestPredictedLower:
    def test_st1_examples(self):
        cfg = LemmaConfig("ST1", 1, 1, 3)
        assert as_words(predicted_lower(cfg, 0), cfg.shape) == {"00", "10", "20", "01", "02"}
        assert predicted_lower(cfg, 1).all()

    def test_st3_full_at_three(self):
        cfg = LemmaConfig("ST3", 0, 0, 3, a=1, b=1)
        assert predicted_lower(cfg, 3).all()

    def test_st3_corner_waits_for_step_three(self):
        # 22 is infected at step 3 only, so no t = 2 bound may contain it
        cfg = LemmaConfig("ST3", 0, 0, 3, a=1, b=1)
        rec = run(initial_seed(cfg), cfg.shape)
        corner = cfg.shape.parse_vertex("22")
        assert rec.time_of[corner] == 3
        assert not predicted_lower(cfg, 2)[corner]

    def test_st2_line_from_step_one(self):
        cfg = LemmaConfig("ST2", 1, 1, 3, i=2)
        line = {"00" + s for s in "012"}
        assert line <= as_words(predicted_lower(cfg, 1), cfg.shape)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            predicted_lower(LemmaConfig("ST1", 1, 1, 3), -1)
        with pytest.raises(OutOfRangeError):
            predicted_lower(LemmaConfig("ST2", 1, 1, 3, i=1), 0)
        with pytest.raises(OutOfRangeError):
            predicted_lower(LemmaConfig("ST3", 1, 1, 3, a=1, b=1), 0)
        with pytest.raises(ValueError):
            predicted_lower(LemmaConfig("ST4", 1, 1, 3), 0)


class TestPredictedExcluded:
    def test_st4_example(self):
        cfg = LemmaConfig("ST4", 1, 1, 3)
        assert as_words(predicted_excluded(cfg, 0), cfg.shape) == {"11", "12", "21", "22"}

    def test_st6_empty_prefix(self):
        cfg = LemmaConfig("ST6", 0, 0, 3, a=1, b=1)
        assert not predicted_excluded(cfg, 1).any()

    def test_st5_example(self):
        cfg = LemmaConfig("ST5", 1, 1, 3, i=1)
        got = as_words(predicted_excluded(cfg, 1), cfg.shape)
        # first digit nonzero; suffix 1 with both prefix digits nonzero, or suffix 2
        want = {"111", "121", "211", "221", "102", "112", "122", "202", "212", "222"}
        assert got == want
        at1 = as_words(run(initial_seed(cfg), cfg.shape).infected_by(1), cfg.shape)
        assert not got & at1

    def test_ranges(self):
        assert excluded_range(LemmaConfig("ST4", 1, 0, 3)) is None
        assert excluded_range(LemmaConfig("ST4", 2, 1, 3)) == (0, 1)
        assert excluded_range(LemmaConfig("ST5", 1, 1, 3, i=1)) == (0, 2)
        assert excluded_range(LemmaConfig("ST6", 0, 0, 3, a=1, b=2)) == (1, None)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            predicted_excluded(LemmaConfig("ST4", 1, 1, 3), 1)
        with pytest.raises(OutOfRangeError):
            predicted_excluded(LemmaConfig("ST5", 1, 1, 3, i=1), 3)
        with pytest.raises(OutOfRangeError):
            predicted_excluded(LemmaConfig("ST6", 1, 1, 3, a=1, b=1), 0)
        with pytest.raises(ValueError):
            predicted_excluded(LemmaConfig("ST1", 1, 1, 3), 0)


def _valid_ts(cfg, horizon):
    for t in range(-1, horizon):
        fn = predicted_lower if cfg.lemma_id in LOWER_IDS else predicted_excluded
        try:
            yield t, fn(cfg, t)
        except OutOfRangeError:
            continue


@pytest.mark.parametrize("lemma_id", LOWER_IDS)
def test_lower_bound_grows_with_t(lemma_id):
    for q, k, l in itertools.product((3, 4), range(3), range(3)):
        for cfg in lemma_configs(lemma_id, k, l, q):
            sets = [m for _, m in _valid_ts(cfg, k + l + 6)]
            for a, b in zip(sets, sets[1:]):
                assert not (a & ~b).any(), cfg


@pytest.mark.parametrize("lemma_id", EXCLUDED_IDS)
def test_each_exclusion_branch_shrinks_with_t(lemma_id):
    for q, k, l in itertools.product((3, 4), range(3), range(3)):
        for cfg in lemma_configs(lemma_id, k, l, q):
            seen = {}
            for t in range(0, k + l + 6):
                try:
                    branches = excluded_branches(cfg, t)
                except OutOfRangeError:
                    continue
                for label, mask in branches.items():
                    if label in seen:
                        assert not (mask & ~seen[label]).any(), (cfg, label, t)
                    seen[label] = mask


def test_exclusion_union_can_grow_when_branches_start():
    # at t = 2 the second group of suffix statements begins to apply
    cfg = LemmaConfig("ST6", 1, 0, 3, a=1, b=1)
    t1, t2 = predicted_excluded(cfg, 1), predicted_excluded(cfg, 2)
    assert (t2 & ~t1).any()
    assert len(excluded_branches(cfg, 1)) < len(excluded_branches(cfg, 2))


@pytest.mark.parametrize("lemma_id", LEMMA_IDS)
def test_predictions_hold_q3(lemma_id):
    for k, l in itertools.product(range(3), range(3)):
        for cfg in lemma_configs(lemma_id, k, l, 3):
            rec = run(initial_seed(cfg), cfg.shape)
            for t, pred in _valid_ts(cfg, rec.rounds + 2):
                at = rec.infected_by(t)
                if lemma_id in LOWER_IDS:
                    assert not (pred & ~at).any(), (cfg, t)
                else:
                    assert not (pred & at).any(), (cfg, t)


def test_lower_ids_and_excluded_ids_partition():
    assert set(LOWER_IDS) | set(EXCLUDED_IDS) == set(LEMMA_IDS)
    assert not set(LOWER_IDS) & set(EXCLUDED_IDS)
