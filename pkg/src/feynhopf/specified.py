"""Specified graphs and their specified covering subgraphs.

A specified graph pairs a graph with one refined index per connected
component: the index of the vertex obtained by shrinking that component.
Components are named by their smallest vertex id.

Convention: a component with no internal edge is a single vertex and its
specification is the refined index that vertex already carries.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Mapping

from .graph import (
    CoveringSubgraph,
    GraphError,
    HalfEdgeGraph,
    contract,
    covering_subgraphs,
    is_1pi,
    loop_number,
    residue,
)
from .theory import Theory, is_in_theory, refinement_indices, vertex_signature

__all__ = [
    "SpecificationError",
    "SpecifiedGraph",
    "SpecifiedSubgraph",
    "specification_problems",
    "residue_signature",
    "specified_covering_subgraphs",
    "specified_contract",
    "vertex_refined_type_of_contraction",
    "all_specifications",
]


class SpecificationError(ValueError):
    pass


def residue_signature(g: HalfEdgeGraph):
    """Signature of the residue of a connected graph."""
    res = residue(g)
    return vertex_signature(res, res.vertices[0])


@dataclass(frozen=True)
class SpecifiedGraph:
    """A graph with a refined index per connected component."""

    graph: HalfEdgeGraph
    spec: tuple  # ((component representative, index), ...) sorted

    def __init__(self, graph: HalfEdgeGraph, spec: Mapping[int, int] | int | None = None):
        reps = [c[0] for c in graph.components]
        if spec is None:
            spec = {}
        elif isinstance(spec, int):
            spec = {r: spec for r in reps}
        norm = {}
        for v, i in spec.items():
            rep = graph.component_of(v)[0]
            if rep in norm and norm[rep] != i:
                raise SpecificationError(f"conflicting specification for component {rep}")
            norm[rep] = int(i)
        for comp, cg in zip(graph.components, graph.component_graphs):
            if comp[0] not in norm and not cg.internal_edges:
                norm[comp[0]] = graph.vertex_index(comp[0])
        missing = [r for r in reps if r not in norm]
        if missing:
            raise SpecificationError(f"components {missing} have no specification")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "spec", tuple(sorted(norm.items())))

    @property
    def spec_map(self) -> dict[int, int]:
        return dict(self.spec)

    @property
    def degree(self) -> int:
        return loop_number(self.graph)

    @cached_property
    def components(self) -> tuple["SpecifiedGraph", ...]:
        spec = self.spec_map
        return tuple(
            SpecifiedGraph(c, {c.vertices[0]: spec[c.vertices[0]]}) for c in self.graph.component_graphs
        )

    def forget(self) -> "SpecifiedGraph":
        """Drop all refinement data (vertex indices and specification)."""
        g = self.graph.with_vertex_indices({v: 0 for v in self.graph.vertices})
        return SpecifiedGraph(g, 0) if not g.is_empty else SpecifiedGraph(g)

    def __repr__(self) -> str:
        return f"SpecifiedGraph({self.graph!r}, spec={self.spec_map})"


def specification_problems(G: SpecifiedGraph, theory: Theory) -> list[str]:
    """Violations of the specified-graph conditions, each with a witness."""
    g = G.graph
    out = list(g.structural_problems())
    if out:
        return out
    if not is_in_theory(g, theory):
        bad = [v for v in g.vertices if theory.vertex_type_name(vertex_signature(g, v)) is None]
        out.append(f"graph not in theory {theory.name}: vertices {bad} have undeclared signatures")
        return out
    for v in g.vertices:
        sig = vertex_signature(g, v)
        if g.vertex_index(v) not in refinement_indices(theory, sig):
            out.append(f"vertex {v} has index {g.vertex_index(v)}, not a refined type of {sig}")
    spec = G.spec_map
    for comp in g.component_graphs:
        rep = comp.vertices[0]
        if not is_1pi(comp):
            out.append(f"component {rep} is not 1PI")
            continue
        sig = residue_signature(comp)
        allowed = refinement_indices(theory, sig)
        if not allowed:
            out.append(f"component {rep} is not superficially divergent (residue {sig})")
        elif spec[rep] not in allowed:
            out.append(f"component {rep}: index {spec[rep]} not in {sorted(allowed)}")
        if not comp.internal_edges and spec[rep] != comp.vertex_index(rep):
            out.append(f"isolated vertex {rep}: specification must equal its refined index")
    return out


def check_specified(G: SpecifiedGraph, theory: Theory) -> SpecifiedGraph:
    problems = specification_problems(G, theory)
    if problems:
        raise SpecificationError("; ".join(problems))
    return G


@dataclass(frozen=True)
class SpecifiedSubgraph:
    """A specified covering subgraph (gamma, j) of ``parent``."""

    parent: SpecifiedGraph
    kept: frozenset
    spec: tuple  # ((component representative of gamma, j), ...) sorted

    @cached_property
    def covering(self) -> CoveringSubgraph:
        return CoveringSubgraph(self.parent.graph, self.kept)

    @property
    def graph(self) -> HalfEdgeGraph:
        return self.covering.graph

    def as_specified(self) -> SpecifiedGraph:
        return SpecifiedGraph(self.graph, dict(self.spec))

    @property
    def is_skeleton(self) -> bool:
        return not self.kept

    @property
    def is_full(self) -> bool:
        return len(self.kept) == len(self.parent.graph.internal_edges)

    def contracted(self) -> SpecifiedGraph:
        return SpecifiedGraph(contract(self.parent.graph, self.covering, dict(self.spec)), self.parent.spec_map)


@lru_cache(maxsize=50_000)
def _component_options(comp: HalfEdgeGraph, index: int, theory: Theory) -> tuple:
    """For one connected component: (kept edges, ((rep, choices), ...)) per admissible subset."""
    out = []
    n_edges = len(comp.internal_edges)
    for sub in covering_subgraphs(comp):
        sg = sub.graph
        choices = []
        for c in sg.component_graphs:
            rep = c.vertices[0]
            if not c.internal_edges:
                choices.append((rep, (c.vertex_index(rep),)))
                continue
            if not is_1pi(c):
                break
            if len(sub.kept) == n_edges:
                # gamma_0 is the whole component of Gamma
                choices.append((rep, (index,)))
                continue
            allowed = refinement_indices(theory, residue_signature(c))
            if not allowed:
                break
            choices.append((rep, tuple(sorted(allowed))))
        else:
            out.append((sub.kept, tuple(choices)))
    return tuple(out)


def specified_covering_subgraphs(G: SpecifiedGraph, theory: Theory) -> list[SpecifiedSubgraph]:
    """All specified covering subgraphs whose contraction stays in the theory.

    gamma runs over locally 1PI covering subgraphs whose components are
    superficially divergent, which is exactly the condition for the
    contracted graph to stay in the theory.  j runs over admissible indices;
    it is forced on isolated vertices and on components of gamma that are a
    whole component of Gamma (there it equals the parent's specification).
    """
    spec = G.spec_map
    per_comp = [
        _component_options(c, spec[c.vertices[0]], theory) for c in G.graph.component_graphs
    ]
    out = []
    for combo in product(*per_comp):
        kept = frozenset().union(*(k for k, _ in combo))
        choice_lists = [ch for _, chs in combo for ch in chs]
        reps = [r for r, _ in choice_lists]
        for js in product(*(c for _, c in choice_lists)):
            out.append(SpecifiedSubgraph(G, kept, tuple(sorted(zip(reps, js)))))
    return out


@lru_cache(maxsize=20_000)
def _admissible_set(G: SpecifiedGraph, theory: Theory) -> frozenset:
    return frozenset(specified_covering_subgraphs(G, theory))


def specified_contract(G: SpecifiedGraph, sub: SpecifiedSubgraph, theory: Theory) -> SpecifiedGraph:
    """Contract each component of gamma to a vertex of refined index j; keep i."""
    if sub.parent != G or sub not in _admissible_set(G, theory):
        raise SpecificationError("not a specified covering subgraph of this graph in the theory")
    return sub.contracted()


def vertex_refined_type_of_contraction(component: HalfEdgeGraph, j: int, theory: Theory):
    """Refined type (residue signature, j) of the vertex replacing ``component``."""
    if not component.is_connected():
        raise GraphError("contraction acts on one connected component")
    sig = residue_signature(component)
    if j not in refinement_indices(theory, sig):
        raise SpecificationError(f"index {j} is not admissible for residue {sig}")
    return sig, j


def all_specifications(g: HalfEdgeGraph, theory: Theory) -> list[SpecifiedGraph]:
    """Every admissible specification of a locally 1PI divergent graph."""
    options = []
    for comp in g.component_graphs:
        rep = comp.vertices[0]
        if not comp.internal_edges:
            options.append([(rep, comp.vertex_index(rep))])
        else:
            options.append([(rep, i) for i in sorted(refinement_indices(theory, residue_signature(comp)))])
    return [SpecifiedGraph(g, dict(c)) for c in product(*options)]
