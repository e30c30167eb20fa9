"""Half-edge Feynman graphs.

A graph is a finite set of vertices, a finite set of typed half-edges, an
involution ``sigma`` on the half-edges and an incidence map sending every
half-edge to its vertex.  Fixed points of ``sigma`` are external legs, the
other orbits are internal edges.

Vertices carry a refined-type index (an ``int``, default 0).  Contraction
stores the index chosen for the vertex produced by shrinking a component,
so later residue and contraction steps see it.

All objects here are immutable; every construction returns a new graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "GraphError",
    "HalfEdgeType",
    "HalfEdgeGraph",
    "CoveringSubgraph",
    "loop_number",
    "is_1pi",
    "is_locally_1pi",
    "covering_subgraphs",
    "contract",
    "residue",
    "skeleton",
    "disjoint_union",
]

ORIENTATIONS = ("in", "out")


class GraphError(ValueError):
    """Raised for structurally invalid graphs or mismatched subgraphs."""


class HalfEdgeType(NamedTuple):
    field: str
    orient: str | None = None

    def __str__(self) -> str:
        return self.field if self.orient is None else f"{self.field}.{self.orient}"

    @classmethod
    def parse(cls, text: str) -> "HalfEdgeType":
        field, _, orient = text.partition(".")
        if orient and orient not in ORIENTATIONS:
            raise GraphError(f"unknown orientation {orient!r} in half-edge type {text!r}")
        return cls(field, orient or None)

    def pairs_with(self, other: "HalfEdgeType") -> bool:
        if self.field != other.field:
            return False
        if self.orient is None or other.orient is None:
            return self.orient is None and other.orient is None
        return self.orient != other.orient


Edge = tuple  # (e, sigma(e)) with e < sigma(e)


class HalfEdgeGraph:
    """Immutable half-edge graph.

    Parameters
    ----------
    vertices : mapping vertex id -> refined index, or iterable of vertex ids
    half_edges : mapping half-edge id -> :class:`HalfEdgeType` (or its string form)
    sigma : mapping half-edge id -> half-edge id; missing ids are fixed points
    incidence : mapping half-edge id -> vertex id
    validate : run the structural checks (disable only to inspect broken input)
    """

    def __init__(
        self,
        vertices: Mapping[int, int] | Iterable[int],
        half_edges: Mapping[int, HalfEdgeType | str],
        sigma: Mapping[int, int],
        incidence: Mapping[int, int],
        validate: bool = True,
    ):
        if isinstance(vertices, Mapping):
            vindex = {int(v): int(i) for v, i in vertices.items()}
        else:
            vindex = {int(v): 0 for v in vertices}
        htype = {}
        for h, t in half_edges.items():
            htype[int(h)] = t if isinstance(t, HalfEdgeType) else HalfEdgeType.parse(str(t))
        self._vindex = dict(sorted(vindex.items()))
        self._htype = dict(sorted(htype.items()))
        self._sigma = {h: int(sigma.get(h, h)) for h in self._htype}
        self._inc = {h: int(incidence[h]) if h in incidence else None for h in self._htype}
        if validate:
            problems = self.structural_problems()
            if problems:
                raise GraphError("; ".join(problems))
        self._key = (
            tuple(self._vindex.items()),
            tuple(
                (h, t.field, t.orient or "", self._sigma[h], self._inc[h])
                for h, t in self._htype.items()
            ),
        )
        self._hash = hash(self._key)

    # -- structure -----------------------------------------------------

    def structural_problems(self) -> list[str]:
        """List violated graph invariants, each with a witness."""
        out = []
        for h, s in self._sigma.items():
            if s not in self._sigma:
                out.append(f"sigma({h}) = {s} is not a half-edge")
            elif self._sigma[s] != h:
                out.append(f"sigma is not an involution: sigma(sigma({h})) = {self._sigma[s]}")
            elif s != h and not self._htype[h].pairs_with(self._htype[s]):
                out.append(
                    f"sigma joins incompatible types: {h}:{self._htype[h]} - {s}:{self._htype[s]}"
                )
        for h, v in self._inc.items():
            if v is None:
                out.append(f"half-edge {h} has no vertex")
            elif v not in self._vindex:
                out.append(f"half-edge {h} attached to unknown vertex {v}")
        return out

    @property
    def key(self) -> tuple:
        """Exact labelled identity (ids included)."""
        return self._key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HalfEdgeGraph) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (
            f"HalfEdgeGraph(V={len(self._vindex)}, H={len(self._htype)}, "
            f"I={len(self.internal_edges)}, E={len(self.external_half_edges)})"
        )

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self._vindex)

    @property
    def half_edges(self) -> tuple[int, ...]:
        return tuple(self._htype)

    def vertex_index(self, v: int) -> int:
        return self._vindex[v]

    @property
    def vertex_indices(self) -> dict[int, int]:
        return dict(self._vindex)

    def htype(self, h: int) -> HalfEdgeType:
        return self._htype[h]

    def sigma(self, h: int) -> int:
        return self._sigma[h]

    def incidence(self, h: int) -> int:
        return self._inc[h]

    @cached_property
    def star(self) -> dict[int, tuple[int, ...]]:
        """st(v): half-edges at each vertex."""
        st: dict[int, list[int]] = {v: [] for v in self._vindex}
        for h, v in self._inc.items():
            st[v].append(h)
        return {v: tuple(hs) for v, hs in st.items()}

    @cached_property
    def internal_edges(self) -> tuple[Edge, ...]:
        return tuple((h, s) for h, s in self._sigma.items() if h < s)

    @cached_property
    def external_half_edges(self) -> tuple[int, ...]:
        return tuple(h for h, s in self._sigma.items() if h == s)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of the connected components, ordered by minimum vertex."""
        parent = {v: v for v in self._vindex}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.internal_edges:
            ra, rb = find(self._inc[a]), find(self._inc[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for v in self._vindex:
            groups.setdefault(find(v), []).append(v)
        return tuple(sorted((tuple(sorted(g)) for g in groups.values()), key=lambda c: c[0]))

    def component_of(self, v: int) -> tuple[int, ...]:
        for comp in self.components:
            if v in comp:
                return comp
        raise KeyError(v)

    def is_connected(self) -> bool:
        return len(self.components) == 1

    def restrict(self, vertex_set: Iterable[int]) -> "HalfEdgeGraph":
        """The subgraph induced on a union of components."""
        vs = set(vertex_set)
        hs = [h for h in self._htype if self._inc[h] in vs]
        for h in hs:
            if self._inc[self._sigma[h]] not in vs:
                raise GraphError("restriction must be a union of connected components")
        return HalfEdgeGraph(
            {v: self._vindex[v] for v in vs},
            {h: self._htype[h] for h in hs},
            {h: self._sigma[h] for h in hs},
            {h: self._inc[h] for h in hs},
            validate=False,
        )

    @cached_property
    def component_graphs(self) -> tuple["HalfEdgeGraph", ...]:
        return tuple(self.restrict(c) for c in self.components)

    def relabel(self, vmap: Mapping[int, int], hmap: Mapping[int, int]) -> "HalfEdgeGraph":
        return HalfEdgeGraph(
            {vmap[v]: i for v, i in self._vindex.items()},
            {hmap[h]: t for h, t in self._htype.items()},
            {hmap[h]: hmap[s] for h, s in self._sigma.items()},
            {hmap[h]: vmap[v] for h, v in self._inc.items()},
        )

    def with_vertex_indices(self, indices: Mapping[int, int]) -> "HalfEdgeGraph":
        vindex = dict(self._vindex)
        vindex.update(indices)
        return HalfEdgeGraph(vindex, self._htype, self._sigma, self._inc, validate=False)

    def with_sigma(self, sigma: Mapping[int, int]) -> "HalfEdgeGraph":
        return HalfEdgeGraph(self._vindex, self._htype, sigma, self._inc, validate=False)

    @property
    def is_empty(self) -> bool:
        return not self._vindex


def loop_number(g: HalfEdgeGraph) -> int:
    """L = |internal edges| - |vertices| + |components|."""
    return len(g.internal_edges) - len(g.vertices) + len(g.components)


def _connected_without(g: HalfEdgeGraph, vertices: tuple[int, ...], skip: Edge | None) -> bool:
    if not vertices:
        return True
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for e in g.internal_edges:
        if e == skip:
            continue
        a, b = g.incidence(e[0]), g.incidence(e[1])
        if a in adj:
            adj[a].append(b)
            adj[b].append(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def is_1pi(g: HalfEdgeGraph) -> bool:
    """Connected, and still connected after cutting any one internal edge."""
    if not g.is_connected():
        return False
    return all(_connected_without(g, g.vertices, e) for e in g.internal_edges)


def is_locally_1pi(g: HalfEdgeGraph) -> bool:
    return all(is_1pi(c) for c in g.component_graphs)


@dataclass(frozen=True)
class CoveringSubgraph:
    """A covering subgraph of ``parent``: same vertices and half-edges,
    internal edges not in ``kept`` are cut into pairs of external legs."""

    parent: HalfEdgeGraph
    kept: frozenset

    def __post_init__(self):
        if not self.kept <= set(self.parent.internal_edges):
            raise GraphError("kept edges must be internal edges of the parent")

    @cached_property
    def graph(self) -> HalfEdgeGraph:
        sigma = {h: h for h in self.parent.half_edges}
        for a, b in self.kept:
            sigma[a], sigma[b] = b, a
        return self.parent.with_sigma(sigma)

    @property
    def cut_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.parent.internal_edges if e not in self.kept)

    def contains(self, other: "CoveringSubgraph") -> bool:
        return self.parent == other.parent and other.kept <= self.kept


def covering_subgraphs(g: HalfEdgeGraph) -> Iterator[CoveringSubgraph]:
    """All 2^|I| covering subgraphs, lexicographic in the internal-edge order
    (first edge varies slowest, "cut" before "kept")."""
    edges = g.internal_edges
    for choice in product((False, True), repeat=len(edges)):
        yield CoveringSubgraph(g, frozenset(e for e, keep in zip(edges, choice) if keep))


def contract(
    g: HalfEdgeGraph,
    sub: CoveringSubgraph,
    indices: Mapping[int, int] | None = None,
) -> HalfEdgeGraph:
    """Shrink every connected component of ``sub`` to one vertex.

    The new vertex keeps the minimum vertex id of its component.  Its refined
    index is ``indices[min id]`` when given; otherwise single-vertex
    components keep their own index and larger ones get 0.
    """
    if sub.parent != g:
        raise GraphError("covering subgraph does not belong to this graph")
    sg = sub.graph
    where = {}
    vindex = {}
    for comp in sg.components:
        rep = comp[0]
        for v in comp:
            where[v] = rep
        if indices is not None and rep in indices:
            vindex[rep] = indices[rep]
        elif len(comp) == 1:
            vindex[rep] = g.vertex_index(rep)
        else:
            vindex[rep] = 0
    dropped = {h for e in sub.kept for h in e}
    keep = [h for h in g.half_edges if h not in dropped]
    return HalfEdgeGraph(
        vindex,
        {h: g.htype(h) for h in keep},
        {h: g.sigma(h) for h in keep},
        {h: where[g.incidence(h)] for h in keep},
    )


def residue(g: HalfEdgeGraph, indices: Mapping[int, int] | None = None) -> HalfEdgeGraph:
    return contract(g, CoveringSubgraph(g, frozenset(g.internal_edges)), indices)


def skeleton(g: HalfEdgeGraph) -> HalfEdgeGraph:
    return CoveringSubgraph(g, frozenset()).graph


def disjoint_union(*graphs: HalfEdgeGraph) -> HalfEdgeGraph:
    vindex, htype, sigma, inc = {}, {}, {}, {}
    for g in graphs:
        if set(g.vertices) & vindex.keys() or set(g.half_edges) & htype.keys():
            raise GraphError("disjoint union needs disjoint vertex and half-edge ids")
        vindex.update(g.vertex_indices)
        for h in g.half_edges:
            htype[h] = g.htype(h)
            sigma[h] = g.sigma(h)
            inc[h] = g.incidence(h)
    return HalfEdgeGraph(vindex, htype, sigma, inc)
