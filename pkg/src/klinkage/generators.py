"""Seeded digraph generators.

Every generator is a pure function of its arguments: the RNG is an explicit
splitmix64 stream, so identical seeds give byte-identical digraphs on every
platform and Python version.  Seeds should be echoed into any artifact
written from generated digraphs so runs can be replayed.
"""

from __future__ import annotations

from .digraph import CompositionSpec, Digraph, build_digraph, compose
from .errors import (
    CoreLinkedError,
    CoreNotStrongError,
    EvenOrderError,
    ArityMismatchError,
    KTooSmallError,
    VertexOutOfRangeError,
)
from .paths import BudgetExceeded

__all__ = [
    "SplitMix64",
    "random_tournament",
    "circulant_tournament",
    "random_semicomplete",
    "random_composition",
    "random_extended_tournament",
    "non_linked_family",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: 64-bit state, one multiply-xorshift chain per draw."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def bit(self) -> int:
        return self.next_u64() >> 63

    def uniform(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        limit = _MASK64 + 1 - (_MASK64 + 1) % n
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def sample(self, population: list[int], k: int) -> list[int]:
        """k distinct elements, partial Fisher-Yates order."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        out = []
        for _ in range(k):
            idx = self.randrange(len(pool))
            out.append(pool.pop(idx))
        return out


def random_tournament(n: int, seed: int) -> Digraph:
    """Orient each unordered pair by one RNG bit."""
    if n < 1:
        raise VertexOutOfRangeError("tournament needs at least one vertex")
    rng = SplitMix64(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            arcs.append((i, j) if rng.bit() else (j, i))
    return build_digraph(n, arcs)


def circulant_tournament(n: int) -> Digraph:
    """Rotational tournament: i dominates the next (n-1)/2 ids cyclically."""
    if n % 2 == 0:
        raise EvenOrderError(f"circulant tournament needs odd order, got {n}")
    if n < 3:
        raise VertexOutOfRangeError("circulant tournament needs at least 3 vertices")
    half = (n - 1) // 2
    arcs = [(i, (i + d) % n) for i in range(n) for d in range(1, half + 1)]
    return build_digraph(n, arcs)


def random_semicomplete(n: int, p_double: float, seed: int) -> Digraph:
    """Random tournament plus, per pair, the reverse arc with probability p_double."""
    if not 0.0 <= p_double <= 1.0:
        raise ValueError("p_double must lie in [0, 1]")
    rng = SplitMix64(seed)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            fwd = bool(rng.bit())
            arcs.append((i, j) if fwd else (j, i))
            if rng.uniform() < p_double:
                arcs.append((j, i) if fwd else (i, j))
    return build_digraph(n, arcs)


def random_composition(
    h: int,
    part_sizes: list[int],
    p_double: float,
    seed: int,
    part_arcs: bool = False,
) -> CompositionSpec:
    """Random semicomplete outer digraph with arcless or random parts.

    With ``part_arcs`` each ordered intra-part pair gets an arc with
    probability 1/2, drawn from the same stream after the outer digraph.
    """
    if h != len(part_sizes):
        raise ArityMismatchError(f"h={h} but {len(part_sizes)} part sizes given")
    if h < 2:
        raise ArityMismatchError("a composition needs at least 2 parts")
    rng = SplitMix64(seed)
    outer_arcs = []
    for i in range(h):
        for j in range(i + 1, h):
            fwd = bool(rng.bit())
            outer_arcs.append((i, j) if fwd else (j, i))
            if rng.uniform() < p_double:
                outer_arcs.append((j, i) if fwd else (i, j))
    outer = build_digraph(h, outer_arcs)

    local_parts = []
    for size in part_sizes:
        if size < 1:
            raise VertexOutOfRangeError("part sizes must be positive")
        arcs = []
        if part_arcs:
            for a in range(size):
                for b in range(size):
                    if a != b and rng.uniform() < 0.5:
                        arcs.append((a, b))
        local_parts.append(build_digraph(size, arcs))
    return CompositionSpec.from_local_parts(outer, local_parts)


def random_extended_tournament(h: int, part_sizes: list[int], seed: int) -> CompositionSpec:
    """Tournament outer digraph with arcless parts.

    This family is quasi-transitive: the only non-adjacent pairs sit inside
    one part, and any intermediate-vertex chain between them routes through
    outer 3-cycles, never length 2.  It is the synthetic substrate for the
    quasi-transitive solvers.
    """
    return random_composition(h, part_sizes, 0.0, seed, part_arcs=False)


def _default_core() -> Digraph:
    # directed 4-cycle: strong, not 2-linked
    return build_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def non_linked_family(
    k: int,
    core: Digraph | None = None,
    witness: tuple[tuple[int, int], tuple[int, int]] | None = None,
) -> tuple[CompositionSpec, list[tuple[int, int]]]:
    """Family of strong compositions that are not k-linked despite one huge part.

    The outer digraph has 2k-3 vertices: a transitive block on the first
    2k-4, with 2-cycles between the last vertex and all others.  All parts
    are single vertices except the last, which carries ``core``: a strong
    digraph that is not 2-linked.  Returns the composition spec together with the
    terminal assignment that cannot be linked.

    ``witness`` names core-local pairs (u, v), (x, y) admitting no disjoint
    (u, v)- and (x, y)-paths; when omitted the exhaustive oracle finds one.
    """
    if k < 3:
        raise KTooSmallError(f"k={k}: the outer digraph would have fewer than 3 vertices")
    if core is None:
        core = _default_core()
    if core.alive_mask != (1 << core.n) - 1:
        raise VertexOutOfRangeError("core must use all ids 0..n-1")
    if not core.is_strong():
        raise CoreNotStrongError("core digraph is not strong")

    if witness is None:
        from .verify import brute_force_k_linked

        res = brute_force_k_linked(core, 2, budget=2_000_000)
        if res is True:
            raise CoreLinkedError("core digraph is 2-linked")
        if isinstance(res, BudgetExceeded):
            raise CoreLinkedError("could not certify the core as non-2-linked in budget")
        witness = (res[0], res[1])
    (u, v), (x, y) = witness

    r = 2 * k - 3
    outer_arcs = [(i, j) for i in range(r - 1) for j in range(i + 1, r - 1)]
    outer_arcs += [(i, r - 1) for i in range(r - 1)]
    outer_arcs += [(r - 1, i) for i in range(r - 1)]
    outer = build_digraph(r, outer_arcs)

    parts = [build_digraph(1, []) for _ in range(r - 1)] + [core]
    spec = CompositionSpec.from_local_parts(outer, parts)

    off = r - 1  # core ids shift by the number of single-vertex parts
    bad_pairs = []
    for i in range(1, k - 1):
        bad_pairs.append((2 * i - 1, 2 * i - 2))  # outer ids of v_{2i}, v_{2i-1}
    bad_pairs.append((u + off, v + off))
    bad_pairs.append((x + off, y + off))
    return spec, bad_pairs
