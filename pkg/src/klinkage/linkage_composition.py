"""Linkage solver for semicomplete compositions.

Reduction: peel off pairs joined by a direct arc, handle the two-part case
by routing one length-2 path through the opposite part, and otherwise
replace every part's interior with a synthetic semicomplete filling whose
arcs a minimal path can never keep.  The filled digraph is semicomplete, so
the semicomplete pipeline solves it; minimalising the returned paths and
checking that no intra-part step survived maps them back to the original
digraph.
"""

from __future__ import annotations

from .connectivity import is_k_strong
from .digraph import (
    CompositionSpec,
    Digraph,
    compose,
    is_semicomplete,
    iter_bits,
    mask_of,
)
from .errors import NewArcLeakError, NotAPartitionError
from .linkage_semicomplete import solve_semicomplete
from .paths import LinkageInstance, PathSystem
from .reports import SolveReport
from .verify import verify_linkage

__all__ = [
    "strip_intra_part_arcs",
    "fill_parts",
    "minimalize_path",
    "solve_composition",
]


def _partition_masks(d: Digraph, parts) -> list[int]:
    masks = [mask_of(p) for p in parts]
    union = 0
    for m in masks:
        if m & union:
            raise NotAPartitionError("parts overlap")
        union |= m
    if union != d.alive_mask:
        raise NotAPartitionError("parts do not cover the vertex set")
    return masks


def strip_intra_part_arcs(d: Digraph, parts) -> Digraph:
    """Keep exactly the arcs running between different parts."""
    masks = _partition_masks(d, parts)
    part_of = {}
    for i, m in enumerate(masks):
        for v in iter_bits(m):
            part_of[v] = i
    arcs = [(u, v) for u, v in d.arcs() if part_of[u] != part_of[v]]
    out = [0] * d.n
    inc = [0] * d.n
    for u, v in arcs:
        out[u] |= 1 << v
        inc[v] |= 1 << u
    return Digraph(d.n, d.alive_mask, out, inc)


def fill_parts(d0: Digraph, parts, ys) -> Digraph:
    """Fill each part with a synthetic semicomplete interior.

    Inside part S with target subset Y' = Y intersect S: Y' and S minus Y'
    each become complete digraphs, and every Y' vertex dominates every
    other part vertex (never the reverse).  A target therefore keeps full
    out-degree while non-targets lose at most |Y| out-arcs relative to the
    unstripped digraph.
    """
    masks = _partition_masks(d0, parts)
    y_mask = mask_of(ys)
    new_arcs = []
    for m in masks:
        if any(d0.out_mask(u) & m for u in iter_bits(m)):
            raise NotAPartitionError("digraph still has intra-part arcs")
        inner_y = m & y_mask
        rest = m & ~y_mask
        for u in iter_bits(inner_y):
            for v in iter_bits(m & ~(1 << u)):
                new_arcs.append((u, v))
        for u in iter_bits(rest):
            for v in iter_bits(rest & ~(1 << u)):
                new_arcs.append((u, v))
    return d0.add_arcs(new_arcs)


def minimalize_path(d: Digraph, path) -> list[int]:
    """Shrink a path to a minimal one with the same endpoints inside V(path).

    Repeatedly replaces the path by a shortest same-endpoint path in the
    subdigraph induced by its own vertices; at the fixed point no path on a
    proper vertex subset exists (it would have been shorter).
    """
    path = list(path)
    while True:
        allowed = mask_of(path)
        shorter = d.shortest_path(path[0], path[-1], forbidden=d.alive_mask & ~allowed)
        if shorter is None:
            raise AssertionError("path vertices no longer connect their endpoints")
        if shorter == path:
            return path
        path = shorter


def _peel_direct(d: Digraph, pairs):
    for i, (x, y) in enumerate(pairs):
        if d.has_arc(x, y):
            return i
    return None


def _two_part_route(d: Digraph, masks, pairs):
    """Routing when only two parts remain: one pair crosses the
    opposite part through a free vertex.  Returns (pair index, path)."""
    terminal_mask = mask_of(t for p in pairs for t in p)
    for i, (x, y) in enumerate(pairs):
        side = next(j for j, m in enumerate(masks) if m >> x & 1)
        if not masks[side] >> y & 1:
            continue  # cross-part pair: would have been peeled as a direct arc
        other = masks[1 - side] & ~terminal_mask
        for v in iter_bits(other):
            if d.has_arc(x, v) and d.has_arc(v, y):
                return i, [x, v, y]
    return None


def _solve_reduced(d: Digraph, part_masks: list[int], pairs, audit, skip_audit, depth):
    k = len(pairs)
    if k == 0:
        return []
    live_masks = [m & d.alive_mask for m in part_masks if m & d.alive_mask]
    if not skip_audit:
        for m in live_masks:
            if (d.alive_mask & ~m).bit_count() < 2 * k - 3:
                raise _CoSizeViolation(depth)

    direct = _peel_direct(d, pairs)
    if direct is not None:
        x, y = pairs[direct]
        rest = _solve_reduced(
            d.delete({x, y}), part_masks, pairs[:direct] + pairs[direct + 1:],
            audit, skip_audit, depth + 1,
        )
        rest.insert(direct, [x, y])
        return rest

    if k == 1:
        (x, y), = pairs
        path = d.shortest_path(x, y)
        if path is None:
            raise _StageStuck("path", f"target {y} unreachable from {x}")
        return [path]

    if len(live_masks) < 2:
        raise _StageStuck("degenerate", "all remaining vertices share one part")

    if len(live_masks) == 2:
        routed = _two_part_route(d, live_masks, pairs)
        if routed is None:
            raise _StageStuck("two-part", "no free vertex in the opposite part")
        i, path = routed
        rest = _solve_reduced(
            d.delete(set(path)), part_masks, pairs[:i] + pairs[i + 1:],
            audit, skip_audit, depth + 1,
        )
        rest.insert(i, path)
        return rest

    parts = [list(iter_bits(m)) for m in live_masks]
    ys = [y for _, y in pairs]
    d0 = strip_intra_part_arcs(d, parts)
    filled = fill_parts(d0, parts, ys)
    # the filled digraph inherits the composition's strongness and degree
    # slack, so the inner audit would only repeat the outer one
    inner = solve_semicomplete(LinkageInstance(filled, tuple(pairs)), skip_audit=True)
    if not inner.linked:
        raise _StageStuck("filled-subsolve", inner)

    part_of = {}
    for j, m in enumerate(live_masks):
        for v in iter_bits(m):
            part_of[v] = j
    out_paths = []
    for path in inner.system.paths:
        minimal = minimalize_path(filled, path)
        for u, v in zip(minimal, minimal[1:]):
            if part_of[u] == part_of[v]:
                raise NewArcLeakError(
                    f"minimal path kept intra-part step ({u},{v}) at depth {depth}"
                )
        out_paths.append(minimal)
    return out_paths


class _CoSizeViolation(Exception):
    def __init__(self, depth):
        self.depth = depth


class _StageStuck(Exception):
    def __init__(self, stage, witness):
        self.stage = stage
        self.witness = witness


def solve_composition(spec: CompositionSpec, pairs, skip_audit: bool = False) -> SolveReport:
    """Linkage pipeline for semicomplete compositions.

    Hypotheses: semicomplete outer digraph, 3k-strong, min out-degree 23k,
    and at least 2k-3 vertices outside every part.  The co-size threshold
    is re-monitored at every peeling depth.  Linked outcomes are certified
    against the original digraph, never the filled one.
    """
    d = compose(spec)
    pairs = tuple(tuple(p) for p in pairs)
    instance = LinkageInstance(d, pairs)  # validates terminals
    k = instance.k
    part_masks = [p.alive_mask for p in spec.parts]

    audit: dict = {"class": "composition", "k": k}
    audit["outer_semicomplete"] = is_semicomplete(spec.outer)
    audit["min_out_degree"] = d.min_out_degree()
    audit["kappa_threshold"] = 3 * k
    audit["out_degree_threshold"] = 23 * k
    audit["min_co_size"] = min((d.alive_mask & ~m).bit_count() for m in part_masks)
    if not skip_audit:
        if not audit["outer_semicomplete"]:
            return SolveReport.of_hypothesis("outer digraph not semicomplete", audit)
        audit["kappa_at_least"] = is_k_strong(d, 3 * k)
        if not audit["kappa_at_least"]:
            return SolveReport.of_hypothesis(f"kappa < {3 * k}", audit)
        if audit["min_out_degree"] < 23 * k:
            return SolveReport.of_hypothesis(f"min out-degree < {23 * k}", audit)
        if audit["min_co_size"] < 2 * k - 3:
            return SolveReport.of_hypothesis(f"a part leaves fewer than {2 * k - 3} vertices", audit)
    else:
        audit["kappa_at_least"] = None
        audit["skipped"] = ["kappa", "min_out_degree", "co_size"]

    try:
        paths = _solve_reduced(d, part_masks, list(pairs), audit, skip_audit, 0)
    except _CoSizeViolation as exc:
        return SolveReport.of_hypothesis(
            f"part co-size fell below threshold at depth {exc.depth}", audit
        )
    except _StageStuck as exc:
        return SolveReport.of_stage(exc.stage, exc.witness, audit)

    system = PathSystem(tuple(tuple(p) for p in paths), pairs, "composition-pipeline")
    report = verify_linkage(d, pairs, system)
    if not report:
        return SolveReport.of_stage("verify", f"{report.clause}: {report.detail}", audit)
    return SolveReport.of_linkage(system, audit)
