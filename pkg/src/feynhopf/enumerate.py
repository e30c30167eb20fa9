"""Exhaustive generation of 1PI superficially divergent graphs of a theory.

Connected graphs are grown from single vertices by two moves: pair two
unpaired half-edges, or attach a new vertex (of any refined type) to an
unpaired half-edge.  States are deduplicated by canonical form, so every
connected graph within the bounds is visited once.  Pruning uses that
pairing is the only move lowering the number of unpaired half-edges, and
it costs a loop.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .canonical import canonical_form, canonical_graph
from .graph import HalfEdgeGraph, HalfEdgeType, is_1pi, loop_number
from .specified import SpecifiedGraph, all_specifications
from .theory import Theory, is_superficially_divergent, load_theory

__all__ = [
    "EnumerationError",
    "HALF_EDGE_CAP",
    "enumerate_graphs",
    "count_by_degree",
    "CorpusPart",
    "CORPUS",
    "corpus",
]

HALF_EDGE_CAP = 24


class EnumerationError(ValueError):
    pass


def _vertex_kinds(theory: Theory, vertex_types) -> list[tuple[tuple[HalfEdgeType, ...], int]]:
    kinds = []
    for name, sig in theory.vertex_types:
        if vertex_types is not None and name not in vertex_types:
            continue
        types = tuple(HalfEdgeType.parse(t) for t, c in sig for _ in range(c))
        for vt, i in sorted(theory.refined):
            if vt == name:
                kinds.append((types, i))
    return kinds


def _build(vindex, htype, sigma, inc) -> HalfEdgeGraph:
    return HalfEdgeGraph(vindex, htype, sigma, inc, validate=False)


def _parts(g: HalfEdgeGraph):
    return (
        g.vertex_indices,
        {h: g.htype(h) for h in g.half_edges},
        {h: g.sigma(h) for h in g.half_edges},
        {h: g.incidence(h) for h in g.half_edges},
    )


def enumerate_graphs(
    theory: Theory,
    max_loops: int,
    max_half_edges: int,
    vertex_types=None,
    cap: int = HALF_EDGE_CAP,
) -> list[HalfEdgeGraph]:
    """All connected 1PI graphs with residue in the theory, up to isomorphism.

    Vertices carry every admissible refined index.  ``vertex_types``
    restricts the vertex types used (by name).  Results are canonical
    representatives ordered by (loops, half-edges, canonical form).
    """
    if max_half_edges > cap:
        raise EnumerationError(f"half-edge bound {max_half_edges} exceeds the cap {cap}")
    if max_loops < 0 or max_half_edges < 0:
        raise EnumerationError("bounds must be nonnegative")
    return list(_enumerate(theory, max_loops, max_half_edges, None if vertex_types is None else tuple(sorted(vertex_types))))


@lru_cache(maxsize=32)
def _enumerate(theory, max_loops, max_half_edges, vertex_types) -> tuple[HalfEdgeGraph, ...]:
    kinds = _vertex_kinds(theory, vertex_types)
    maxval = theory.max_valence
    seen: set = set()
    stack: list[HalfEdgeGraph] = []
    results = []

    def push(g: HalfEdgeGraph):
        n_he = len(g.half_edges)
        if n_he > max_half_edges:
            return
        L = loop_number(g)
        if L > max_loops:
            return
        n_open = len(g.external_half_edges)
        if n_open - 2 * (max_loops - L) > maxval:
            return
        form = canonical_form(g)
        if form in seen:
            return
        seen.add(form)
        cg = canonical_graph(form)
        if is_1pi(cg) and n_open and is_superficially_divergent(cg, theory):
            results.append((L, n_he, form, cg))
        if n_open:
            stack.append(cg)

    for types, i in kinds:
        push(_build({0: i}, dict(enumerate(types)), {}, {h: 0 for h in range(len(types))}))

    while stack:
        g = stack.pop()
        vindex, htype, sigma, inc = _parts(g)
        open_ = g.external_half_edges
        for x, a in enumerate(open_):
            for b in open_[x + 1 :]:
                if theory.can_pair(htype[a], htype[b]):
                    s = dict(sigma)
                    s[a], s[b] = b, a
                    push(_build(vindex, htype, s, inc))
        v_new = max(vindex) + 1
        h_new = max(htype) + 1
        for a in open_:
            for types, i in kinds:
                if len(htype) + len(types) > max_half_edges:
                    continue
                tried = set()
                for k, t in enumerate(types):
                    if t in tried or not theory.can_pair(htype[a], t):
                        continue
                    tried.add(t)
                    vi, ht, s, ic = dict(vindex), dict(htype), dict(sigma), dict(inc)
                    vi[v_new] = i
                    for j, tt in enumerate(types):
                        ht[h_new + j] = tt
                        ic[h_new + j] = v_new
                        s[h_new + j] = h_new + j
                    s[a], s[h_new + k] = h_new + k, a
                    push(_build(vi, ht, s, ic))
    results.sort(key=lambda r: r[:3])
    return tuple(r[3] for r in results)


def count_by_degree(graphs) -> dict[int, int]:
    return dict(sorted(Counter(loop_number(g) for g in graphs).items()))


@dataclass(frozen=True)
class CorpusPart:
    max_loops: int
    max_half_edges: int
    vertex_types: tuple | None = None


# Shipped test corpora.  Bivalent insertions make the number of graphs per
# loop order infinite, so every part also bounds the half-edge count.
CORPUS = {
    "phi3": (CorpusPart(3, 21, ("three",)), CorpusPart(2, 12)),
    "qed": (CorpusPart(2, 15, ("vertex",)), CorpusPart(1, 10)),
    "phi4": (CorpusPart(2, 16, ("four",)), CorpusPart(1, 8)),
}


def corpus(theory_name: str, max_loops: int | None = None) -> list[SpecifiedGraph]:
    """Every admissible specification of every graph in the shipped corpus."""
    theory = load_theory(theory_name)
    forms = {}
    for part in CORPUS[theory_name]:
        loops = part.max_loops if max_loops is None else min(part.max_loops, max_loops)
        for g in enumerate_graphs(theory, loops, part.max_half_edges, part.vertex_types):
            forms.setdefault(canonical_form(g), g)
    graphs = sorted(forms.values(), key=lambda g: (loop_number(g), len(g.half_edges), canonical_form(g)))
    return [G for g in graphs for G in all_specifications(g, theory)]
