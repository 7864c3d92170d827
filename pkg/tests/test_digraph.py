import pytest
from hypothesis import given, settings

from klinkage import (
    CompositionSpec,
    build_digraph,
    compose,
    composition_from_digraph,
    is_l_quasi_transitive,
    is_semicomplete,
    is_tournament,
    spanning_tournament,
)
from klinkage.digraph import iter_bits
from klinkage.errors import (
    ArityMismatchError,
    DuplicateArcError,
    NotACompositionError,
    NotSemicompleteError,
    PartOverlapError,
    SelfLoopError,
    VertexOutOfRangeError,
)
from klinkage.generators import random_semicomplete

from conftest import digraphs, semicomplete_digraphs


def cycle3():
    return build_digraph(3, [(0, 1), (1, 2), (2, 0)])


def complete(n):
    return build_digraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


class TestBuild:
    def test_three_cycle(self):
        d = cycle3()
        assert all(d.out_degree(v) == 1 for v in d.vertices())
        assert d.num_arcs == 3

    def test_two_cycle_is_semicomplete(self):
        d = build_digraph(2, [(0, 1), (1, 0)])
        assert is_semicomplete(d)

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            build_digraph(2, [(0, 0)])

    def test_duplicate_arc_rejected(self):
        with pytest.raises(DuplicateArcError):
            build_digraph(2, [(0, 1), (0, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(VertexOutOfRangeError):
            build_digraph(2, [(0, 2)])

    def test_degree_sum_is_arc_count(self):
        d = build_digraph(4, [(0, 1), (1, 2), (2, 0), (3, 1)])
        assert sum(d.out_degree(v) for v in d.vertices()) == d.num_arcs
        assert sum(d.in_degree(v) for v in d.vertices()) == d.num_arcs


class TestPredicates:
    def test_cycle_semicomplete(self):
        assert is_semicomplete(cycle3())

    def test_path_not_semicomplete(self):
        assert not is_semicomplete(build_digraph(3, [(0, 1), (1, 2)]))

    def test_complete_semicomplete(self):
        assert is_semicomplete(complete(4))

    def test_tournament_rejects_two_cycles(self):
        assert is_tournament(cycle3())
        assert not is_tournament(complete(3))

    def test_path_not_quasi_transitive(self):
        assert not is_l_quasi_transitive(build_digraph(3, [(0, 1), (1, 2)]), 2)

    def test_four_cycle_exact_lengths(self):
        c4 = build_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert is_l_quasi_transitive(c4, 3)
        assert not is_l_quasi_transitive(c4, 2)

    @given(semicomplete_digraphs())
    @settings(max_examples=60, deadline=None)
    def test_semicomplete_is_l_qt_for_every_l(self, d):
        # endpoints of any path are adjacent when every pair is adjacent
        for l in (1, 2, 3):
            assert is_l_quasi_transitive(d, l)

    @given(digraphs(min_n=2, max_n=7))
    @settings(max_examples=80, deadline=None)
    def test_length_one_matches_semicompleteness(self, d):
        assert is_l_quasi_transitive(d, 1) == is_semicomplete(d)

    def test_length_one_matches_semicompleteness_at_scale(self):
        from conftest import seeded_digraph

        for i in range(500):
            d = seeded_digraph(2 + i % 11, 123_000 + i, (3, 5, 8, 10)[i % 4])
            assert is_l_quasi_transitive(d, 1) == is_semicomplete(d)


class TestSpanningTournament:
    def test_tournament_unchanged(self):
        d = cycle3()
        assert spanning_tournament(d) == d

    def test_complete_gives_transitive(self):
        t = spanning_tournament(complete(3))
        assert sorted(t.arcs()) == [(0, 1), (0, 2), (1, 2)]

    def test_rejects_non_semicomplete(self):
        with pytest.raises(NotSemicompleteError):
            spanning_tournament(build_digraph(3, [(0, 1), (1, 2)]))

    @given(semicomplete_digraphs())
    @settings(max_examples=60, deadline=None)
    def test_half_of_all_pairs_and_subset(self, d):
        t = spanning_tournament(d)
        n = d.order
        assert t.num_arcs == n * (n - 1) // 2
        assert set(t.arcs()) <= set(d.arcs())


class TestSubdigraphs:
    def test_induced(self):
        got = cycle3().induced({0, 1})
        assert got.arcs() == [(0, 1)]
        assert got.order == 2

    def test_delete_nothing_is_identity(self):
        d = cycle3()
        assert d.delete(set()) == d

    def test_delete_keeps_ids(self):
        got = cycle3().delete({2})
        assert got.arcs() == [(0, 1)]
        assert got.has_vertex(0) and got.has_vertex(1) and not got.has_vertex(2)

    def test_delete_out_of_range(self):
        with pytest.raises(VertexOutOfRangeError):
            cycle3().delete({5})


class TestComposition:
    def test_two_cycle_of_singletons(self):
        two = build_digraph(2, [(0, 1), (1, 0)])
        spec = CompositionSpec.from_local_parts(two, [build_digraph(1, []), build_digraph(1, [])])
        assert compose(spec).arcs() == [(0, 1), (1, 0)]

    def test_arc_count_formula(self):
        # arcless parts of sizes 2 and 3 under a 2-cycle: 2*3 + 3*2 arcs
        two = build_digraph(2, [(0, 1), (1, 0)])
        spec = CompositionSpec.from_local_parts(two, [build_digraph(2, []), build_digraph(3, [])])
        assert compose(spec).num_arcs == 12

    def test_transitive_triangle_of_singletons(self):
        tri = build_digraph(3, [(0, 1), (0, 2), (1, 2)])
        spec = CompositionSpec.from_local_parts(tri, [build_digraph(1, [])] * 3)
        assert compose(spec) == tri

    def test_part_overlap_rejected(self):
        two = build_digraph(2, [(0, 1), (1, 0)])
        part = build_digraph(2, [])
        with pytest.raises(PartOverlapError):
            compose(CompositionSpec(two, (part, part)))

    def test_arity_mismatch(self):
        two = build_digraph(2, [(0, 1), (1, 0)])
        with pytest.raises(ArityMismatchError):
            compose(CompositionSpec.from_local_parts(two, [build_digraph(1, [])]))

    def test_strip_and_readd_reproduces_arcs(self):
        from klinkage import strip_intra_part_arcs

        spec = CompositionSpec.from_local_parts(
            random_semicomplete(3, 0.5, 4),
            [build_digraph(2, [(0, 1)]), build_digraph(2, [(1, 0)]), build_digraph(1, [])],
        )
        d = compose(spec)
        parts = spec.part_vertex_ids()
        stripped = strip_intra_part_arcs(d, parts)
        intra = [a for p in spec.parts for a in p.arcs()]
        assert set(stripped.add_arcs(intra).arcs()) == set(d.arcs())

    def test_recover_spec_roundtrip(self):
        spec = CompositionSpec.from_local_parts(
            random_semicomplete(4, 0.3, 9),
            [build_digraph(2, [(0, 1)]), build_digraph(1, []), build_digraph(3, []), build_digraph(1, [])],
        )
        d = compose(spec)
        back = composition_from_digraph(d, spec.part_vertex_ids())
        assert compose(back) == d

    def test_recover_rejects_partial_bundle(self):
        d = build_digraph(3, [(0, 2), (1, 2), (2, 0)])  # {0,1} -> {2} full, {2} -> {0,1} partial
        with pytest.raises(NotACompositionError):
            composition_from_digraph(d, [[0, 1], [2]])


def test_iter_bits_ascending():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
