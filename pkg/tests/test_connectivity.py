import pytest
from hypothesis import given, settings

from klinkage import (
    Infeasible,
    PathSystem,
    build_digraph,
    is_k_strong,
    kappa,
    local_connectivity,
    menger_set_paths,
    min_vertex_menger,
)
from klinkage._kernel import available_backends
from klinkage.acceptance import brute_kappa, brute_local_connectivity, brute_min_total_vertices
from klinkage.errors import SameVertexError, SetOverlapError, SizeMismatchError
from klinkage.generators import SplitMix64, circulant_tournament, random_tournament

from conftest import digraphs, seeded_digraph


def complete(n):
    return build_digraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


class TestLocalConnectivity:
    def test_complete_four(self):
        d = complete(4)
        # direct arc + two middles, for every ordered pair
        for x in range(4):
            for y in range(4):
                if x != y:
                    assert local_connectivity(d, x, y) == 3

    def test_cycle(self):
        d = build_digraph(3, [(0, 1), (1, 2), (2, 0)])
        assert local_connectivity(d, 0, 1) == 1

    def test_unreachable(self):
        d = build_digraph(3, [(0, 1), (1, 2)])
        assert local_connectivity(d, 2, 0) == 0

    def test_same_vertex_rejected(self):
        with pytest.raises(SameVertexError):
            local_connectivity(complete(3), 1, 1)

    def test_limit_caps_early(self):
        d = complete(6)
        assert local_connectivity(d, 0, 1, limit=2) == 2

    @given(digraphs(min_n=2, max_n=7))
    @settings(max_examples=60, deadline=None)
    def test_matches_path_family_packing(self, d):
        vs = list(d.vertices())
        x, y = vs[0], vs[-1]
        if x == y:
            return
        assert local_connectivity(d, x, y) == brute_local_connectivity(d, x, y)


class TestKappa:
    def test_transitive_tournament_is_zero(self):
        d = build_digraph(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
        assert kappa(d) == 0

    def test_complete_five(self):
        assert kappa(complete(5)) == 4

    def test_circulant_seven(self):
        assert kappa(circulant_tournament(7)) == 3

    def test_is_k_strong_consistent(self):
        d = circulant_tournament(7)
        assert is_k_strong(d, 3)
        assert not is_k_strong(d, 4)

    def test_too_few_vertices_for_k(self):
        assert not is_k_strong(complete(3), 3)  # needs k+1 = 4 vertices

    @given(digraphs(min_n=2, max_n=7))
    @settings(max_examples=60, deadline=None)
    def test_matches_cut_enumeration(self, d):
        assert kappa(d) == brute_kappa(d)

    def test_matches_cut_enumeration_n9(self):
        for trial in range(25):
            d = seeded_digraph(9, 14_000 + trial, (3, 5, 7, 9)[trial % 4])
            assert kappa(d) == brute_kappa(d)

    def test_relabeling_invariance(self):
        rng = SplitMix64(77)
        for trial in range(25):
            d = seeded_digraph(7, 900 + trial, 5)
            perm = rng.sample(list(range(7)), 7)
            relabeled = build_digraph(7, [(perm[u], perm[v]) for u, v in d.arcs()])
            assert kappa(d) == kappa(relabeled)
            x, y = rng.sample(list(range(7)), 2)
            assert local_connectivity(d, x, y) == local_connectivity(
                relabeled, perm[x], perm[y]
            )


class TestBackends:
    def test_backends_agree(self):
        if "c" not in available_backends():
            pytest.skip("compiled kernel not built")
        for trial in range(20):
            d = seeded_digraph(10, 3_000 + trial, 4)
            for x, y in [(0, 9), (5, 2)]:
                assert local_connectivity(d, x, y, backend="c") == local_connectivity(
                    d, x, y, backend="python"
                )
        t = random_tournament(40, 5)
        assert kappa(t, backend="c") == kappa(t, backend="python")


class TestMengerSetPaths:
    def test_complete_two_pairs(self):
        got = menger_set_paths(complete(5), [0, 1], [2, 3])
        assert isinstance(got, PathSystem)
        assert sorted(got.paths) == [(0, 2), (1, 3)]

    def test_avoid_blocks_and_names_cut(self):
        d = build_digraph(3, [(0, 1), (1, 2)])
        got = menger_set_paths(d, [0], [2], avoid=[1])
        assert isinstance(got, Infeasible)
        assert got.separator == (1,)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            menger_set_paths(complete(4), [0], [1, 2])

    def test_overlap_rejected(self):
        with pytest.raises(SetOverlapError):
            menger_set_paths(complete(4), [0, 1], [1, 2])

    def test_system_size_matches_exhaustive_feasibility(self):
        for trial in range(30):
            d = seeded_digraph(8, 5_000 + trial, 4)
            rng = SplitMix64(6_000 + trial)
            picks = rng.sample(list(range(8)), 4)
            xs, ys = picks[:2], picks[2:]
            got = menger_set_paths(d, xs, ys)
            feasible = brute_min_total_vertices(d, xs, ys) is not None
            # set-to-set with |X|=|Y| and distinct starts: compare against
            # exhaustive system enumeration restricted to X-starts
            exhaustive = _exhaustive_x_onto_y(d, xs, ys)
            assert isinstance(got, PathSystem) == exhaustive
            if not exhaustive:
                assert isinstance(got, Infeasible)
                assert len(got.separator) < len(xs)

    def test_empty_sets(self):
        got = menger_set_paths(complete(3), [], [])
        assert isinstance(got, PathSystem) and len(got) == 0

    def test_succeeds_up_to_connectivity_degree(self):
        # |X| = |Y| = m <= kappa always routes in a strong-enough digraph
        exercised = 0
        for trial in range(30):
            d = seeded_digraph(9, 12_000 + trial, 6)
            k = kappa(d)
            if k < 2:
                continue
            rng = SplitMix64(13_000 + trial)
            picks = rng.sample(list(d.vertices()), 4)
            got = menger_set_paths(d, picks[:2], picks[2:])
            assert isinstance(got, PathSystem)
            exercised += 1
        assert exercised > 5


def _exhaustive_x_onto_y(d, xs, ys) -> bool:
    """Does a fully disjoint X-onto-Y system exist (any permutation)?"""
    from itertools import permutations

    from klinkage import brute_force_disjoint_paths

    for perm in permutations(ys):
        res = brute_force_disjoint_paths(d, list(zip(xs, perm)))
        if isinstance(res, PathSystem):
            return True
    return False


class TestMinVertexMenger:
    def test_direct_arcs_total(self):
        got = min_vertex_menger(complete(6), [0, 1, 2], [3, 4])
        assert got.total_vertices() == 4

    def test_forced_intermediate_total(self):
        d = build_digraph(5, [(0, 2), (1, 4), (4, 3)])
        got = min_vertex_menger(d, [0, 1], [2, 3])
        assert got.total_vertices() == 5

    def test_start_set_only_at_initials(self):
        hits = 0
        for trial in range(50):
            d = seeded_digraph(10, 7_000 + trial, 4)
            rng = SplitMix64(8_000 + trial)
            picks = rng.sample(list(range(10)), 6)
            us, ys = picks[:4], picks[4:]
            got = min_vertex_menger(d, us, ys)
            if isinstance(got, PathSystem):
                hits += 1
                uset = set(us)
                for p in got.paths:
                    assert not uset.intersection(p[1:])
        assert hits > 5  # the property must actually have been exercised

    def test_total_matches_exhaustive_minimum(self):
        for trial in range(40):
            d = seeded_digraph(8, 9_000 + trial, 5)
            rng = SplitMix64(10_000 + trial)
            picks = rng.sample(list(range(8)), 5)
            us, ys = picks[:3], picks[3:]
            got = min_vertex_menger(d, us, ys)
            want = brute_min_total_vertices(d, us, ys)
            if want is None:
                assert isinstance(got, Infeasible)
            else:
                assert got.total_vertices() == want
