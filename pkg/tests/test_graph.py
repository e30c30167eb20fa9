import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from feynhopf import load_theory
from feynhopf.graph import (
    CoveringSubgraph,
    GraphError,
    HalfEdgeGraph,
    contract,
    covering_subgraphs,
    disjoint_union,
    is_1pi,
    is_locally_1pi,
    loop_number,
    residue,
    skeleton,
)

THEORIES = {n: load_theory(n) for n in ("phi3", "qed", "phi4")}
seeds = st.integers(0, 10**9)
names = st.sampled_from(sorted(THEORIES))


def random_graph(name, seed, **kw):
    return O.random_graph(THEORIES[name], random.Random(seed), **kw)


def fish():
    return HalfEdgeGraph({0: 0, 1: 0}, {h: "phi" for h in range(6)}, {1: 4, 4: 1, 2: 5, 5: 2}, {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1})


def test_sigma_must_be_involution():
    with pytest.raises(GraphError, match="involution"):
        HalfEdgeGraph({0: 0}, {0: "phi", 1: "phi", 2: "phi"}, {0: 1, 1: 2, 2: 0}, {0: 0, 1: 0, 2: 0})


def test_unknown_vertex_rejected():
    with pytest.raises(GraphError, match="unknown vertex 7"):
        HalfEdgeGraph({0: 0}, {0: "phi"}, {}, {0: 7})


def test_incompatible_orientations_rejected():
    with pytest.raises(GraphError, match="incompatible"):
        HalfEdgeGraph({0: 0, 1: 0}, {0: "electron.in", 1: "electron.in"}, {0: 1, 1: 0}, {0: 0, 1: 1})


def test_structural_problems_give_witness():
    g = HalfEdgeGraph({0: 0}, {0: "phi", 1: "phi"}, {0: 1, 1: 1}, {0: 0, 1: 0}, validate=False)
    assert any("sigma(sigma(0))" in p for p in g.structural_problems())


def test_fish_basics():
    g = fish()
    assert loop_number(g) == 1
    assert is_1pi(g)
    assert len(g.internal_edges) == 2
    assert g.external_half_edges == (0, 3)
    assert len(list(covering_subgraphs(g))) == 4


def test_tree_is_not_1pi():
    g = HalfEdgeGraph([0, 1], {0: "phi", 1: "phi", 2: "phi", 3: "phi", 4: "phi", 5: "phi"}, {2: 3, 3: 2}, {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1})
    assert loop_number(g) == 0
    assert not is_1pi(g)


def test_empty_graph():
    g = HalfEdgeGraph({}, {}, {}, {})
    assert g.is_empty and loop_number(g) == 0 and g.components == ()


@given(names, seeds)
def test_loop_number_matches_oracle(name, seed):
    g = random_graph(name, seed)
    assert loop_number(g) == O.loop_number(O.Raw.of(g))


@given(names, seeds)
def test_components_match_oracle(name, seed):
    g = random_graph(name, seed)
    r = O.Raw.of(g)
    want = O.components(r.vindex, [(r.inc[a], r.inc[b]) for a, b in r.edges()])
    assert sorted(map(sorted, want)) == sorted(map(list, g.components))


@given(names, seeds)
def test_1pi_matches_oracle(name, seed):
    g = random_graph(name, seed, max_vertices=4, pair_prob=0.95)
    assert is_1pi(g) == O.is_1pi(O.Raw.of(g))
    assert is_locally_1pi(g) == all(O.is_1pi(c) for c in O.split_components(O.Raw.of(g)))


@given(names, seeds, st.data())
def test_contraction_matches_oracle(name, seed, data):
    g = random_graph(name, seed, max_vertices=4, pair_prob=0.9)
    edges = g.internal_edges
    kept = frozenset(data.draw(st.sets(st.sampled_from(edges))) if edges else ())
    sub = CoveringSubgraph(g, kept)
    indices = {c[0]: data.draw(st.integers(0, 2)) for c in sub.graph.components}
    got = O.Raw.of(contract(g, sub, indices))
    want = O.contract(O.Raw.of(g), kept, indices)
    assert (got.vindex, got.htype, got.sigma, got.inc) == (want.vindex, want.htype, want.sigma, want.inc)


@given(names, seeds)
def test_contraction_laws(name, seed):
    g = random_graph(name, seed)
    assert contract(g, CoveringSubgraph(g, frozenset())) == g
    res = residue(g)
    assert len(res.vertices) == len(g.components)
    assert res.internal_edges == ()
    assert set(res.external_half_edges) == set(g.external_half_edges)
    sk = skeleton(g)
    assert sk.internal_edges == () and sk.vertices == g.vertices
    # loop numbers add up over the subgraph/quotient split
    for sub in list(covering_subgraphs(g))[:8]:
        assert loop_number(sub.graph) + loop_number(contract(g, sub)) == loop_number(g)


@given(names, seeds, seeds)
def test_disjoint_union(name, s1, s2):
    g1 = random_graph(name, s1)
    g2 = random_graph(name, s2)
    off_v = max(g1.vertices) + 1
    off_h = max(g1.half_edges, default=-1) + 1
    g2s = g2.relabel({v: v + off_v for v in g2.vertices}, {h: h + off_h for h in g2.half_edges})
    u = disjoint_union(g1, g2s)
    assert loop_number(u) == loop_number(g1) + loop_number(g2)
    assert len(u.components) == len(g1.components) + len(g2.components)
    with pytest.raises(GraphError):
        disjoint_union(g1, g1)


def test_covering_subgraph_of_other_graph_rejected():
    g = fish()
    other = HalfEdgeGraph({0: 0}, {0: "phi", 1: "phi"}, {0: 1, 1: 0}, {0: 0, 1: 0})
    with pytest.raises(GraphError):
        contract(other, CoveringSubgraph(g, frozenset()))
