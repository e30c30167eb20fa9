"""Momentum spaces of graphs and polynomial functions on them.

Each half-edge ``h`` carries a ``D``-vector of raw variables ``(h, k)``.  The
momentum space is cut out by momentum conservation at every vertex and by
``p_h + p_sigma(h) = 0`` on every internal edge.  Row reduction over the
rationals (internal half-edges eliminated first) leaves a subset of the raw
variables as free coordinates, so external momenta are preferred as
coordinates and the remaining free internal ones play the role of loop
momenta.  Every raw variable gets an expression in the free ones.

Only half-edges, sigma and incidence enter; vertex indices do not.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .graph import GraphError, HalfEdgeGraph, disjoint_union
from .poly import Poly

__all__ = [
    "MomentumSpace",
    "PolyFn",
    "BElement",
    "momentum_space",
    "momentum_key",
    "rref",
    "pullback_contraction",
    "pullback_inclusion",
    "bullet",
]


def momentum_key(g: HalfEdgeGraph) -> tuple:
    return tuple((h, g.sigma(h), g.incidence(h)) for h in g.half_edges)


def rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


class MomentumSpace:
    """The space W of a graph at dimension ``D``."""

    def __init__(self, graph: HalfEdgeGraph, D: int = 1):
        if D < 1:
            raise ValueError("dimension must be positive")
        self.graph = graph
        self.D = D
        self.key = (momentum_key(graph), D)
        internal = [h for h in graph.half_edges if graph.sigma(h) != h]
        external = list(graph.external_half_edges)
        self.columns = internal + external
        col = {h: i for i, h in enumerate(self.columns)}
        rows = []
        for v in graph.vertices:
            if graph.star[v]:
                r = [0] * len(self.columns)
                for h in graph.star[v]:
                    r[col[h]] += 1
                rows.append(r)
        for a, b in graph.internal_edges:
            r = [0] * len(self.columns)
            r[col[a]] += 1
            r[col[b]] += 1
            rows.append(r)
        self.constraint_rows = rows
        reduced, pivots = rref(rows, len(self.columns))
        free_cols = [c for c in range(len(self.columns)) if c not in set(pivots)]
        free_h = [self.columns[c] for c in free_cols]
        # scalar solution: h -> {free h: coeff}
        sol: dict[int, dict[int, Fraction]] = {h: {h: Fraction(1)} for h in free_h}
        for row, pc in zip(reduced, pivots):
            sol[self.columns[pc]] = {self.columns[c]: -row[c] for c in free_cols if row[c]}
        self._scalar = sol
        self.free_half_edges = tuple(free_h)
        self.free = tuple((h, k) for k in range(D) for h in free_h)
        ext = set(external)
        self.external_free = tuple(v for v in self.free if v[0] in ext)
        self._free_set = frozenset(self.free)
        self._hash = hash(self.key)

    @property
    def dim(self) -> int:
        return len(self.free)

    @cached_property
    def substitution(self) -> dict[tuple, Poly]:
        """Raw variable -> linear polynomial in the free coordinates."""
        out = {}
        for h, lin in self._scalar.items():
            for k in range(self.D):
                out[(h, k)] = Poly({(((f, k), 1),): c for f, c in lin.items()})
        return out

    def name(self, var: tuple) -> str:
        h, k = var
        return f"p{h}" if self.D == 1 else f"p{h}_{k}"

    @cached_property
    def names(self) -> dict[str, tuple]:
        return {self.name((h, k)): (h, k) for h in self.graph.half_edges for k in range(self.D)}

    def owns(self, p: Poly) -> bool:
        return p.variables <= self._free_set

    def reduce(self, p: Poly) -> Poly:
        """Rewrite a polynomial in raw variables of this graph in free coordinates."""
        subs = self.substitution
        missing = sorted(v for v in p.variables if v not in subs)
        if missing:
            raise GraphError(f"variables {missing} are not momenta of this graph")
        todo = {v: subs[v] for v in p.variables if v not in self._free_set}
        return p.substitute(todo) if todo else p

    def one(self) -> "PolyFn":
        return PolyFn(self, Poly.const(1))

    def zero(self) -> "PolyFn":
        return PolyFn(self, Poly())

    def coordinate(self, var: tuple) -> "PolyFn":
        return PolyFn(self, self.substitution[var])

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, MomentumSpace) and self.key == other.key)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"MomentumSpace(dim={self.dim}, D={self.D})"


_by_key: dict = {}


def momentum_space(g: HalfEdgeGraph, D: int = 1) -> MomentumSpace:
    """Cached: graphs with equal half-edges, sigma and incidence share a space."""
    key = (momentum_key(g), D)
    sp = _by_key.get(key)
    if sp is None:
        sp = _by_key[key] = MomentumSpace(g, D)
    return sp


@dataclass(frozen=True)
class PolyFn:
    """A polynomial function on a momentum space, in its free coordinates."""

    space: MomentumSpace
    poly: Poly

    def __post_init__(self):
        if not self.space.owns(self.poly):
            raise GraphError("polynomial uses variables that are not free coordinates of its space")

    def _check(self, other: "PolyFn") -> None:
        if self.space != other.space:
            raise GraphError("functions live on different momentum spaces")

    def __add__(self, other: "PolyFn") -> "PolyFn":
        self._check(other)
        return PolyFn(self.space, self.poly + other.poly)

    def __sub__(self, other: "PolyFn") -> "PolyFn":
        self._check(other)
        return PolyFn(self.space, self.poly - other.poly)

    def __neg__(self) -> "PolyFn":
        return PolyFn(self.space, -self.poly)

    def __mul__(self, other) -> "PolyFn":
        if isinstance(other, PolyFn):
            self._check(other)
            return PolyFn(self.space, self.poly * other.poly)
        return PolyFn(self.space, self.poly * other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def pull_to(self, target: MomentumSpace) -> "PolyFn":
        """Restrict along a linear map that reads raw momenta unchanged."""
        if target == self.space:
            return self
        subs = target.substitution
        if any(v not in subs for v in self.poly.variables):
            raise GraphError("target graph lacks half-edges this function depends on")
        return PolyFn(target, self.poly.substitute({v: subs[v] for v in self.poly.variables}))

    def bullet(self, other: "PolyFn") -> "PolyFn":
        return bullet(self, other)

    def evaluate(self, point: Mapping) -> Fraction:
        return self.poly.evaluate(point)

    def degree(self) -> int:
        return self.poly.degree()

    def format(self) -> str:
        return self.poly.format(self.space.name)

    def __str__(self) -> str:
        return self.format()


def _same_momenta_on(sub: HalfEdgeGraph, parent: HalfEdgeGraph) -> bool:
    return all(h in parent.half_edges for h in sub.half_edges)


def pullback_contraction(f: PolyFn, parent: HalfEdgeGraph, contracted: HalfEdgeGraph) -> PolyFn:
    """i: functions on Gamma/gamma -> functions on Gamma.

    A point of W_Gamma is projected to W_{Gamma/gamma} by forgetting the
    momenta of the half-edges inside gamma.
    """
    if f.space.key[0] != momentum_key(contracted):
        raise GraphError("function is not defined on the contracted graph")
    if not _same_momenta_on(contracted, parent) or any(
        contracted.sigma(h) != parent.sigma(h) for h in contracted.half_edges
    ):
        raise GraphError("contracted graph does not come from this parent")
    return f.pull_to(momentum_space(parent, f.space.D))


def pullback_inclusion(f: PolyFn, sub: HalfEdgeGraph, parent: HalfEdgeGraph) -> PolyFn:
    """pi: functions on gamma -> functions on Gamma, restricting to W_Gamma inside W_gamma."""
    if f.space.key[0] != momentum_key(sub):
        raise GraphError("function is not defined on the subgraph")
    if sub.half_edges != parent.half_edges or any(
        sub.incidence(h) != parent.incidence(h)
        or (sub.sigma(h) != h and sub.sigma(h) != parent.sigma(h))
        for h in sub.half_edges
    ):
        raise GraphError("not a covering subgraph of this parent")
    return f.pull_to(momentum_space(parent, f.space.D))


def _union_space(a: MomentumSpace, b: MomentumSpace) -> MomentumSpace:
    if a.D != b.D:
        raise GraphError("dimension mismatch")
    return momentum_space(disjoint_union(a.graph, b.graph), a.D)


def bullet(u: PolyFn, v: PolyFn) -> PolyFn:
    """Concatenation product: a function on the disjoint union of both graphs.

    Free coordinates of a disjoint union are the union of the free
    coordinates of the pieces, so the product is the plain polynomial
    product.
    """
    if set(u.space.graph.half_edges) & set(v.space.graph.half_edges) or set(
        u.space.graph.vertices
    ) & set(v.space.graph.vertices):
        raise GraphError("concatenation needs graphs with disjoint labels")
    return PolyFn(_union_space(u.space, v.space), u.poly * v.poly)


class BElement:
    """A pure tensor of the graph-indexed algebra: component graph -> function.

    Components are kept separate; :meth:`collapse` turns the tensor into a
    single function on the disjoint union.
    """

    __slots__ = ("factors",)

    def __init__(self, factors: Mapping[tuple, PolyFn] | None = None):
        self.factors = dict(sorted((factors or {}).items()))

    @classmethod
    def of(cls, f: PolyFn) -> "BElement":
        return cls({f.space.key: f})

    def bullet(self, other: "BElement") -> "BElement":
        if self.factors.keys() & other.factors.keys():
            raise GraphError("overlapping components in concatenation")
        return BElement({**self.factors, **other.factors})

    def __mul__(self, other: "BElement") -> "BElement":
        """Componentwise product on the same set of components."""
        if self.factors.keys() != other.factors.keys():
            raise GraphError("componentwise product needs the same components")
        return BElement({k: f * other.factors[k] for k, f in self.factors.items()})

    def collapse(self) -> PolyFn | None:
        out = None
        for f in self.factors.values():
            out = f if out is None else bullet(out, f)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BElement) and self.factors == other.factors

    def __repr__(self) -> str:
        return f"BElement({len(self.factors)} factors)"
