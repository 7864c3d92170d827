"""Shared strategies and small exhaustive oracles for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from klinkage import Digraph, build_digraph
from klinkage.generators import SplitMix64


@st.composite
def digraphs(draw, min_n=2, max_n=8):
    """Random digraph: each ordered pair gets an arc independently."""
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u in range(n):
        for v in range(n):
            if u != v and draw(st.booleans()):
                arcs.append((u, v))
    return build_digraph(n, arcs)


@st.composite
def semicomplete_digraphs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    arcs = []
    for u in range(n):
        for v in range(u + 1, n):
            kind = draw(st.sampled_from(["fwd", "bwd", "both"]))
            if kind in ("fwd", "both"):
                arcs.append((u, v))
            if kind in ("bwd", "both"):
                arcs.append((v, u))
    return build_digraph(n, arcs)


def seeded_digraph(n: int, seed: int, tenths: int) -> Digraph:
    """Deterministic random digraph; arc probability tenths/10."""
    rng = SplitMix64(seed)
    arcs = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.randrange(10) < tenths
    ]
    return build_digraph(n, arcs)
