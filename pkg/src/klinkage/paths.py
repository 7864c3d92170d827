"""Path systems and linkage instances."""

from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import Digraph
from .errors import VertexOutOfRangeError

__all__ = ["PathSystem", "LinkageInstance", "Infeasible", "BudgetExceeded"]


@dataclass(frozen=True)
class PathSystem:
    """An ordered collection of vertex sequences with their (source, target) roles.

    Unless ``shared_endpoints`` is set, the paths claim full pairwise
    vertex-disjointness.  Claims are certified by ``verify.verify_linkage``,
    never assumed.
    """

    paths: tuple[tuple[int, ...], ...]
    pairing: tuple[tuple[int, int], ...]
    provenance: str = ""
    shared_endpoints: bool = False

    def __post_init__(self):
        if len(self.paths) != len(self.pairing):
            raise ValueError("one (source, target) role per path required")

    def __len__(self) -> int:
        return len(self.paths)

    def vertices(self) -> set[int]:
        return {v for p in self.paths for v in p}

    def initials(self) -> set[int]:
        return {p[0] for p in self.paths}

    def terminals(self) -> set[int]:
        return {p[-1] for p in self.paths}

    def interiors(self) -> set[int]:
        return {v for p in self.paths for v in p[1:-1]}

    def total_vertices(self) -> int:
        return sum(len(p) for p in self.paths)


def path_system(paths, pairing=None, provenance: str = "") -> PathSystem:
    """Build a PathSystem; pairing defaults to each path's own endpoints."""
    tup = tuple(tuple(p) for p in paths)
    if pairing is None:
        pairing = tuple((p[0], p[-1]) for p in tup)
    return PathSystem(tup, tuple(tuple(pr) for pr in pairing), provenance)


@dataclass(frozen=True)
class LinkageInstance:
    """A digraph with ordered terminal pairs; the 2k terminals are distinct."""

    digraph: Digraph
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        seen = set()
        for x, y in self.pairs:
            for t in (x, y):
                if not self.digraph.has_vertex(t):
                    raise VertexOutOfRangeError(f"terminal {t} not in digraph")
                if t in seen:
                    raise ValueError(f"terminal {t} used twice")
                seen.add(t)
        if not self.pairs:
            raise ValueError("at least one terminal pair required")

    @property
    def k(self) -> int:
        return len(self.pairs)

    def sources(self) -> list[int]:
        return [x for x, _ in self.pairs]

    def targets(self) -> list[int]:
        return [y for _, y in self.pairs]


@dataclass(frozen=True)
class Infeasible:
    """Negative answer for a disjoint-path query.

    ``separator`` (when known) is a vertex set meeting every candidate path;
    exhaustive searches leave it empty.
    """

    separator: tuple[int, ...] = ()


@dataclass(frozen=True)
class BudgetExceeded:
    """Search aborted after the node-expansion budget ran out."""

    expanded: int = 0
