import pytest

from klinkage import (
    CompositionSpec,
    build_auxiliary,
    build_digraph,
    compose,
    pool_threshold,
    find_short_anchor_pair,
    independent_short_paths,
    is_l_quasi_transitive,
    is_semicomplete,
    solve_lqt,
    verify_linkage,
    verify_short_anchor,
)
from klinkage.errors import (
    NotStrongError,
    PreconditionViolatedError,
    ThresholdUnreachableError,
)
from klinkage.generators import random_extended_tournament, random_semicomplete, random_tournament


def complete(n):
    return build_digraph(n, [(i, j) for i in range(n) for j in range(n) if i != j])


class TestThresholdFormula:
    def test_frozen_values(self):
        assert pool_threshold(1, 2) == 30
        assert pool_threshold(2, 2) == 300
        assert pool_threshold(1, 3) == 35

    def test_bounds_checked(self):
        with pytest.raises(ValueError):
            pool_threshold(0, 2)
        with pytest.raises(ValueError):
            pool_threshold(1, 1)


class TestIndependentShortPaths:
    def test_complete_counts(self):
        d = complete(8)
        pool = independent_short_paths(d, 0, 1, 2, 6)
        assert len(pool.forward) == 6  # direct arc + five distinct middles

    def test_directed_path_single(self):
        d = build_digraph(3, [(0, 1), (1, 2)])
        pool = independent_short_paths(d, 0, 2, 2, 5)
        assert pool.forward == ((0, 1, 2),)
        assert pool.backward == ()

    def test_lonely_arc(self):
        d = build_digraph(4, [(0, 1)])
        pool = independent_short_paths(d, 0, 1, 2, 5)
        assert pool.forward == ((0, 1),)

    def test_pools_are_independent(self):
        d = random_semicomplete(12, 0.5, 3)
        pool = independent_short_paths(d, 0, 5, 2, 8)
        seen = set()
        for p in pool.forward + pool.backward:
            inner = set(p[1:-1])
            assert not inner & seen
            seen |= inner


def _triangle_gadget():
    """One non-adjacent pair backed by exactly three independent 3-paths."""
    outer = build_digraph(3, [(0, 1), (1, 2), (2, 0)])
    return CompositionSpec.from_local_parts(
        outer, [build_digraph(2, []), complete(3), complete(3)]
    )


class TestBuildAuxiliary:
    def test_semicomplete_adds_nothing(self):
        d = random_semicomplete(15, 0.4, 2)
        aux = build_auxiliary(d, [0], [1], 2, 5)
        assert not aux.new_arcs
        assert not aux.available

    def test_triangle_gadget_pool(self):
        spec = _triangle_gadget()
        d = compose(spec)
        assert is_l_quasi_transitive(d, 2)
        aux = build_auxiliary(d, [], [], 2, 3)
        assert len(aux.new_arcs) == 1
        ((arc, pool),) = aux.available.items()
        assert arc == (0, 1)
        assert len(pool) == 3
        assert all(len(p) == 4 for p in pool)
        interiors = [set(p[1:-1]) for p in pool]
        assert not any(a & b for i, a in enumerate(interiors) for b in interiors[i + 1:])

    def test_not_strong_rejected(self):
        with pytest.raises(NotStrongError):
            build_auxiliary(build_digraph(3, [(0, 1), (1, 2)]), [], [], 2, 3)

    def test_threshold_unreachable_on_small_digraph(self):
        spec = random_extended_tournament(10, [3] * 10, 4)
        d = compose(spec)
        assert d.is_strong()
        with pytest.raises(ThresholdUnreachableError):
            build_auxiliary(d, [], [], 2, pool_threshold(2, 2))

    def test_terminal_arcs_complete_the_terminals(self):
        spec = random_extended_tournament(12, [3] * 12, 6)
        d = compose(spec)
        x, y = 0, 5
        aux = build_auxiliary(d, [x], [y], 2, 3)
        assert is_semicomplete(aux.augmented)
        for w, t in aux.terminal_arcs:
            assert t == x or w == y
            assert not d.has_arc(w, t)


class TestShortAnchors:
    def test_single_arc_anchors(self):
        t = build_digraph(2, [(0, 1)])
        assert verify_short_anchor(t, [0], [1])

    def test_distance_four_fails(self):
        t = random_tournament(10, 0)
        path = t.shortest_path(5, 3)
        assert len(path) - 1 == 4
        assert not verify_short_anchor(t, [5], [3])

    def test_pair_found_and_reverified(self):
        t = random_tournament(12, 5)
        got = find_short_anchor_pair(t, 2)
        assert got is not None
        assert verify_short_anchor(t, *got)

    def test_strong_tournament_k1_always_found(self):
        for n in (3, 5, 8):
            t = random_tournament(n, 100 + n)
            got = find_short_anchor_pair(t, 1, allow_undersized=True)
            assert got is not None

    def test_undersized_needs_override(self):
        t = random_tournament(11, 9)
        with pytest.raises(PreconditionViolatedError):
            find_short_anchor_pair(t, 2)
        assert find_short_anchor_pair(t, 2, allow_undersized=True) is not None

    def test_circulant_eleven_pair_reverified(self):
        from klinkage.generators import circulant_tournament

        t = circulant_tournament(11)
        got = find_short_anchor_pair(t, 2, allow_undersized=True)
        assert got is not None
        assert verify_short_anchor(t, *got)


class TestSolveLqt:
    def test_semicomplete_degenerates(self):
        d = random_semicomplete(50, 0.4, 9)
        rep = solve_lqt(d, ((0, 30),), 2, threshold=5, skip_audit=True)
        assert rep.linked
        assert rep.audit["new_arcs"] == 0

    def test_not_strong(self):
        d = build_digraph(4, [(0, 1), (1, 2), (2, 3)])
        rep = solve_lqt(d, ((0, 3),), 2)
        assert rep.outcome == "hypothesis_violated"
        assert rep.failure == "not strong"

    def test_connectivity_bound_audited_by_default(self):
        spec = random_extended_tournament(20, [3] * 20, 0)
        d = compose(spec)
        rep = solve_lqt(d, ((0, 30),), 2, threshold=5)
        assert rep.outcome == "hypothesis_violated"
        assert "kappa" in rep.failure

    def test_synthetic_instances_link_inside_original_arcs(self):
        solved = 0
        for seed in range(6):
            spec = random_extended_tournament(20, [3] * 20, seed)
            d = compose(spec)
            if not d.is_strong():
                continue
            parts = spec.part_vertex_ids()
            pairs = ((parts[0][0], parts[10][0]),)
            rep = solve_lqt(d, pairs, 2, threshold=5, skip_audit=True)
            assert rep.linked, (rep.stage, rep.witness)
            assert verify_linkage(d, pairs, rep.system).ok
            solved += 1
        assert solved >= 5

    def test_two_pairs_on_larger_instances(self):
        for seed in range(2):
            spec = random_extended_tournament(30, [3] * 30, 74_000 + seed)
            d = compose(spec)
            assert d.is_strong()
            parts = spec.part_vertex_ids()
            pairs = ((parts[0][0], parts[10][0]), (parts[5][0], parts[20][0]))
            rep = solve_lqt(d, pairs, 2, threshold=5, skip_audit=True)
            assert rep.linked, (rep.stage, rep.witness)
            assert verify_linkage(d, pairs, rep.system).ok

    def test_degraded_runs_never_crash(self):
        from klinkage import SplitMix64

        linked = 0
        for seed in range(40):
            h = 8 + seed % 10
            spec = random_extended_tournament(h, [1 + seed % 3] * h, 84_000 + seed)
            d = compose(spec)
            if not d.is_strong():
                continue
            rng = SplitMix64(85_000 + seed)
            terms = rng.sample(list(d.vertices()), 2)
            pairs = ((terms[0], terms[1]),)
            rep = solve_lqt(d, pairs, 2, threshold=2 + seed % 4, skip_audit=True)
            assert rep.outcome in ("linked", "stage_failed")
            if rep.linked:
                assert verify_linkage(d, pairs, rep.system).ok
                linked += 1
        assert linked > 10

    def test_same_part_terminals(self):
        spec = random_extended_tournament(20, [3] * 20, 2)
        d = compose(spec)
        parts = spec.part_vertex_ids()
        pairs = ((parts[0][0], parts[0][1]),)  # non-adjacent terminal pair
        rep = solve_lqt(d, pairs, 2, threshold=5, skip_audit=True)
        assert rep.linked
        assert verify_linkage(d, pairs, rep.system).ok
