"""Canonical forms and isomorphisms of half-edge graphs.

Vertices are coloured by refined index and local half-edge data, the
colouring is refined Weisfeiler-Lehman style, and ties are broken by
individualising one vertex at a time.  Every leaf of the search fixes a
vertex order; the graph is encoded under that order and the smallest
encoding wins.  Graphs here have a handful of vertices, so the search is
exhaustive (no automorphism pruning).
"""
from __future__ import annotations

from functools import lru_cache

from .graph import GraphError, HalfEdgeGraph, HalfEdgeType

__all__ = [
    "canonical_form",
    "canonical_graph",
    "is_isomorphic",
    "find_isomorphism",
    "automorphism_generators",
    "form_bytes",
]


def _initial_colours(g: HalfEdgeGraph) -> dict[int, tuple]:
    out = {}
    for v in g.vertices:
        local = []
        for h in g.star[v]:
            s = g.sigma(h)
            local.append((str(g.htype(h)), s == h, "" if s == h else str(g.htype(s))))
        out[v] = (g.vertex_index(v), tuple(sorted(local)))
    return out


def _compress(sig: dict[int, tuple]) -> dict[int, int]:
    rank = {s: i for i, s in enumerate(sorted(set(sig.values())))}
    return {v: rank[s] for v, s in sig.items()}


def _refine(g: HalfEdgeGraph, colours: dict[int, int]) -> dict[int, int]:
    n_classes = len(set(colours.values()))
    while True:
        sig = {}
        for v in g.vertices:
            nb = []
            for h in g.star[v]:
                s = g.sigma(h)
                if s != h:
                    nb.append((str(g.htype(h)), str(g.htype(s)), colours[g.incidence(s)]))
            sig[v] = (colours[v], tuple(sorted(nb)))
        colours = _compress(sig)
        k = len(set(colours.values()))
        if k == n_classes:
            return colours
        n_classes = k


def _encode(g: HalfEdgeGraph, order: list[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        desc = []
        for h in g.star[v]:
            s = g.sigma(h)
            if s == h:
                desc.append((str(g.htype(h)), -1, ""))
            else:
                desc.append((str(g.htype(h)), pos[g.incidence(s)], str(g.htype(s))))
        rows.append((g.vertex_index(v), tuple(sorted(desc))))
    return tuple(rows)


def _search(g: HalfEdgeGraph, colours: dict[int, int]) -> tuple[tuple, list[list[int]]]:
    colours = _refine(g, colours)
    cells: dict[int, list[int]] = {}
    for v, c in colours.items():
        cells.setdefault(c, []).append(v)
    target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        order = sorted(g.vertices, key=colours.__getitem__)
        return _encode(g, order), [order]
    best, leaves = None, []
    for v in cells[target]:
        ind = _compress({u: (colours[u], 0 if u == v else 1) for u in g.vertices})
        enc, orders = _search(g, ind)
        if best is None or enc < best:
            best, leaves = enc, list(orders)
        elif enc == best:
            leaves.extend(orders)
    return best, leaves


@lru_cache(maxsize=200_000)
def _connected_canon(g: HalfEdgeGraph) -> tuple[tuple, tuple[tuple[int, ...], ...]]:
    enc, orders = _search(g, _compress(_initial_colours(g)))
    return enc, tuple(tuple(o) for o in orders)


@lru_cache(maxsize=200_000)
def canonical_form(g: HalfEdgeGraph) -> tuple:
    """Relabelling-invariant encoding; equal exactly on isomorphic graphs.

    Types, orientations, refined vertex indices, sigma and incidence are all
    part of the form.  Disconnected graphs give the sorted tuple of their
    component forms.
    """
    return tuple(sorted(_connected_canon(c)[0] for c in g.component_graphs))


def form_bytes(form: tuple) -> bytes:
    return repr(form).encode()


def is_isomorphic(g1: HalfEdgeGraph, g2: HalfEdgeGraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)


def _build_component(enc: tuple, v0: int, h0: int) -> tuple[dict, dict, dict, dict]:
    vindex, htype, sigma, inc = {}, {}, {}, {}
    slots: dict[tuple, list[int]] = {}
    h = h0
    for i, (idx, desc) in enumerate(enc):
        vindex[v0 + i] = idx
        for t, j, u in desc:
            htype[h] = HalfEdgeType.parse(t)
            inc[h] = v0 + i
            if j < 0:
                sigma[h] = h
            else:
                slots.setdefault((i, t, j, u), []).append(h)
            h += 1
    for (i, t, j, u), hs in slots.items():
        if (i, t) > (j, u):
            continue
        if (i, t) == (j, u):
            for a, b in zip(hs[0::2], hs[1::2]):
                sigma[a], sigma[b] = b, a
        else:
            for a, b in zip(hs, slots[(j, u, i, t)]):
                sigma[a], sigma[b] = b, a
    return vindex, htype, sigma, inc


@lru_cache(maxsize=100_000)
def canonical_graph(form: tuple) -> HalfEdgeGraph:
    """Rebuild the canonical representative (ids 0, 1, ...) from a form."""
    vindex, htype, sigma, inc = {}, {}, {}, {}
    v0 = h0 = 0
    for enc in form:
        parts = _build_component(enc, v0, h0)
        for acc, part in zip((vindex, htype, sigma, inc), parts):
            acc.update(part)
        v0 += len(enc)
        h0 += sum(len(desc) for _, desc in enc)
    return HalfEdgeGraph(vindex, htype, sigma, inc)


def _slot_lists(g: HalfEdgeGraph, order: tuple[int, ...]) -> dict[tuple, list]:
    """Half-edges and edges grouped by their position-level description."""
    pos = {v: i for i, v in enumerate(order)}
    groups: dict[tuple, list] = {}
    for h in g.half_edges:
        s = g.sigma(h)
        a = (pos[g.incidence(h)], str(g.htype(h)))
        if s == h:
            groups.setdefault(("ext",) + a, []).append((h,))
            continue
        b = (pos[g.incidence(s)], str(g.htype(s)))
        if a < b or (a == b and h < s):
            groups.setdefault(("int",) + a + b, []).append((h, s))
    return groups


def _match(g1, order1, g2, order2) -> tuple[dict, dict]:
    vmap = dict(zip(order1, order2))
    s1, s2 = _slot_lists(g1, order1), _slot_lists(g2, order2)
    hmap = {}
    for key, items in s1.items():
        for x, y in zip(items, s2[key]):
            hmap.update(zip(x, y))
    return vmap, hmap


def find_isomorphism(g1: HalfEdgeGraph, g2: HalfEdgeGraph) -> tuple[dict, dict] | None:
    """Vertex and half-edge maps g1 -> g2, or None."""
    if canonical_form(g1) != canonical_form(g2):
        return None
    comps2: dict[tuple, list[HalfEdgeGraph]] = {}
    for c in g2.component_graphs:
        comps2.setdefault(_connected_canon(c)[0], []).append(c)
    vmap, hmap = {}, {}
    for c1 in g1.component_graphs:
        enc, orders1 = _connected_canon(c1)
        c2 = comps2[enc].pop()
        vm, hm = _match(c1, orders1[0], c2, _connected_canon(c2)[1][0])
        vmap.update(vm)
        hmap.update(hm)
    return vmap, hmap


def automorphism_generators(g: HalfEdgeGraph) -> list[dict[int, int]]:
    """Half-edge permutations generating Aut(g) for a connected graph."""
    if not g.is_connected():
        raise GraphError("automorphism generators need a connected graph")
    _, orders = _connected_canon(g)
    gens = []
    for o in orders[1:]:
        gens.append(_match(g, orders[0], g, o)[1])
    for key, items in _slot_lists(g, orders[0]).items():
        for x, y in zip(items, items[1:]):
            perm = {h: h for h in g.half_edges}
            perm.update(zip(x, y))
            perm.update(zip(y, x))
            gens.append(perm)
        if key[0] == "int" and key[1:3] == key[3:5]:
            for a, b in items:
                perm = {h: h for h in g.half_edges}
                perm[a], perm[b] = b, a
                gens.append(perm)
    return gens
