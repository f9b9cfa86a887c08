import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qboot.algebra import (
    SpanWitness,
    decompose_closed,
    find_span_witness,
    is_closed,
    is_internally_spanned,
    lemma5_violations,
    spanned_dim_scan,
    two_cube_time,
    witness_problems,
)
from qboot.engine import closure, run
from qboot.errors import NotPercolatingError, ResourceGuardError
from qboot.hamming_core import CubeShape, Pattern, all_patterns, join, pattern_distance
from qboot.suites import all_subsets, random_percolating_seed, two_cube_pairs

from .strategies import seeded_shapes, shapes


def P(text, q=3):
    return Pattern.parse(text, q)


Q23 = CubeShape(2, 3)


class TestClosed:
    def test_examples(self):
        assert is_closed(P("0*").mask(Q23), Q23)
        assert not is_closed(["00", "01"], Q23)
        assert is_closed([], Q23)

    def test_every_subcube_is_closed(self):
        shape = CubeShape(3, 3)
        assert all(is_closed(x.mask(shape), shape) for x in all_patterns(shape))

    def test_matches_closure_fixpoint_exhaustively(self):
        for shape in (Q23, CubeShape(1, 4), CubeShape(3, 2)):
            for s in all_subsets(shape):
                assert is_closed(s, shape) == np.array_equal(closure(s, shape), s)

    @settings(max_examples=300, deadline=None)
    @given(seeded_shapes(limit=81))
    def test_matches_closure_fixpoint_random(self, case):
        shape, s = case
        assert is_closed(s, shape) == np.array_equal(closure(s, shape), s)


class TestDecompose:
    def test_single_line(self):
        dec = decompose_closed(P("0*").mask(Q23), Q23)
        assert [str(c) for c in dec.components] == ["0*"]
        assert dec.valid

    def test_far_vertices(self):
        shape = CubeShape(3, 3)
        dec = decompose_closed(["000", "111"], shape)
        assert [str(c) for c in dec.components] == ["000", "111"]
        assert dec.valid

    def test_empty(self):
        dec = decompose_closed([], Q23)
        assert dec.components == [] and dec.valid

    def test_rejects_open_set(self):
        with pytest.raises(ValueError):
            decompose_closed(["00", "01"], Q23)

    @settings(max_examples=200, deadline=None)
    @given(seeded_shapes(limit=243))
    def test_closures_decompose(self, case):
        shape, s = case
        dec = decompose_closed(closure(s, shape), shape)
        assert dec.valid
        for x, y in itertools.combinations(dec.components, 2):
            assert pattern_distance(x, y) >= 3


class TestInternallySpanned:
    def test_examples(self):
        assert is_internally_spanned(["00", "11"], P("**"), Q23)
        assert is_internally_spanned(Q23.full_set(), P("1*"), Q23)
        assert not is_internally_spanned(["00"], P("1*"), Q23)
        assert not is_internally_spanned(["00", "11"], P("0*"), Q23)

    def test_dim_scan(self):
        assert spanned_dim_scan(["00", "11"], Q23) == {0, 2}
        assert spanned_dim_scan(Q23.full_set(), Q23) == {0, 1, 2}

    def test_dim_scan_needs_percolation(self):
        with pytest.raises(NotPercolatingError):
            spanned_dim_scan(["00"], Q23)

    def test_violation_report(self):
        assert lemma5_violations({0, 2}, 2) == []
        assert lemma5_violations({0, 3}, 3) == [1]

    def test_random_seeds_satisfy_dimension_gaps(self):
        shape = CubeShape(3, 3)
        rng = np.random.default_rng(7)
        for _ in range(20):
            seed = random_percolating_seed(shape, rng)
            assert lemma5_violations(spanned_dim_scan(seed, shape), 3) == []


class TestWitness:
    def test_diagonal_pair(self):
        w = find_span_witness(["00", "11"], Q23)
        assert [str(x) for x in w.chain] == ["00", "**"]
        assert [str(x) for x in w.mergers] == ["11"]
        assert w.dims == [0, 2]
        assert witness_problems(w, ["00", "11"], Q23) == []

    def test_full_seed(self):
        w = find_span_witness(Q23.full_set(), Q23)
        assert w.chain[0].dim == 0 and w.chain[-1] == Pattern.full(Q23)
        assert witness_problems(w, Q23.full_set(), Q23) == []

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            find_span_witness([0], CubeShape(8, 4))

    def test_needs_percolation(self):
        with pytest.raises(NotPercolatingError):
            find_span_witness(["00"], Q23)

    def test_problems_are_reported(self):
        bad = SpanWitness([P("0*"), P("**")], [P("22")])
        problems = witness_problems(bad, ["00", "11"], Q23)
        assert any("starts at dimension" in p for p in problems)
        assert any("not internally spanned" in p for p in problems)

    def test_three_cube_samples(self):
        shape = CubeShape(3, 3)
        rng = np.random.default_rng(3)
        for _ in range(10):
            seed = random_percolating_seed(shape, rng)
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                w = find_span_witness(seed, shape)
            assert witness_problems(w, seed, shape) == []


class TestTwoCubeTime:
    def test_examples(self):
        assert two_cube_time(P("*0"), P("0*")) == 1
        assert two_cube_time(P("00"), P("11")) == 3
        assert two_cube_time(P("*00"), P("0*1")) == 3

    def test_far_pair_rejected(self):
        with pytest.raises(ValueError):
            two_cube_time(P("000"), P("111"))

    def test_nested_pair_rejected(self):
        with pytest.raises(ValueError):
            two_cube_time(P("0*"), P("00"))

    @pytest.mark.parametrize("q", [3, 4])
    def test_matches_simulation_n3(self, q):
        shape = CubeShape(3, q)
        for x, y, _ in two_cube_pairs(shape):
            rec = run(x.mask(shape) | y.mask(shape), shape)
            assert rec.rounds == two_cube_time(x, y), (x, y)

    def test_union_closes_to_join(self):
        shape = CubeShape(3, 3)
        for x, y, z in two_cube_pairs(shape):
            assert np.array_equal(closure(x.mask(shape) | y.mask(shape), shape), z.mask(shape))


@settings(max_examples=300, deadline=None)
@given(shapes(limit=243), st.data())
def test_seeds_in_two_close_cubes_stay_in_join(shape, data):
    pats = list(all_patterns(shape))
    x = data.draw(st.sampled_from(pats))
    y = data.draw(st.sampled_from(pats))
    if pattern_distance(x, y) > 2:
        return
    pool = sorted(set(x.members().tolist()) | set(y.members().tolist()))
    seed = data.draw(st.lists(st.sampled_from(pool), max_size=8))
    c = closure(seed, shape)
    assert not (c & ~join(x, y).mask(shape)).any()
