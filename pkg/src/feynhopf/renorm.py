"""Characters, convolution and Birkhoff decomposition.

Maps are evaluated on labelled specified graphs and return a value living
on that graph's momentum space: a ``PolyFn`` (mode ``"taylor"``, the plain
algebra) or a ``Laurent`` of ``PolyFn`` (mode ``"ms"``).  Values of labelled
graphs are memoised per map.  Labels matter because a value such as "the
square of the first external coordinate" is only defined once coordinates
are fixed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph import HalfEdgeGraph, disjoint_union, loop_number
from .momenta import GraphError, MomentumSpace, PolyFn, momentum_space
from .schemes import I_minus_P_ms, Laurent, P_ms, P_taylor
from .specified import SpecifiedGraph, all_specifications, specified_covering_subgraphs
from .theory import Theory

__all__ = [
    "MODES",
    "CharacterError",
    "LinearMap",
    "Character",
    "IdentityMap",
    "LinearCombination",
    "Convolution",
    "InverseSeries",
    "Birkhoff",
    "identity_character",
    "convolve",
    "inverse_character",
    "birkhoff_ms",
    "birkhoff_taylor",
    "verify_character",
    "CharacterReport",
    "shifted",
]

MODES = ("taylor", "ms")


class CharacterError(ValueError):
    pass


def value_one(space: MomentumSpace, mode: str):
    return space.one() if mode == "taylor" else Laurent({0: space.one()}, space)


def value_zero(space: MomentumSpace, mode: str):
    return space.zero() if mode == "taylor" else Laurent({}, space)


def value_space(v) -> MomentumSpace:
    return v.space


class LinearMap:
    """Linear map from the specified-graph bialgebra to the value algebra."""

    def __init__(self, theory: Theory, mode: str, D: int = 1):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.theory, self.mode, self.D = theory, mode, D
        self._memo: dict = {}

    def space(self, G: SpecifiedGraph) -> MomentumSpace:
        return momentum_space(G.graph, self.D)

    def one(self, G: SpecifiedGraph):
        return value_one(self.space(G), self.mode)

    def zero(self, G: SpecifiedGraph):
        return value_zero(self.space(G), self.mode)

    def __call__(self, G: SpecifiedGraph):
        key = (G.graph.key, G.spec)
        v = self._memo.get(key)
        if v is None:
            v = self._memo[key] = self._eval(G)
        return v

    def _eval(self, G: SpecifiedGraph):
        raise NotImplementedError

    def _compatible(self, other: "LinearMap") -> None:
        if (self.mode, self.D, self.theory) != (other.mode, other.D, other.theory):
            raise CharacterError("maps differ in scheme, dimension or theory")

    def __add__(self, other: "LinearMap") -> "LinearCombination":
        return LinearCombination([(1, self), (1, other)])

    def __sub__(self, other: "LinearMap") -> "LinearCombination":
        return LinearCombination([(1, self), (-1, other)])

    def __neg__(self) -> "LinearCombination":
        return LinearCombination([(-1, self)])


def _product_over_components(f: LinearMap, G: SpecifiedGraph):
    vals = [f(c) for c in G.components]
    out = vals[0]
    for v in vals[1:]:
        out = out.bullet(v)
    return out


class Character(LinearMap):
    """Multiplicative extension of values given on connected graphs.

    ``generator(G, space)`` is called only for connected graphs with at least
    one internal edge; graphs without internal edges get 1.
    """

    def __init__(self, generator: Callable, theory: Theory, mode: str, D: int = 1, name: str = "phi"):
        super().__init__(theory, mode, D)
        self.generator = generator
        self.name = name

    def _eval(self, G: SpecifiedGraph):
        if G.graph.is_empty or loop_number(G.graph) == 0:
            return self.one(G)
        if not G.graph.is_connected():
            return _product_over_components(self, G)
        v = self.generator(G, self.space(G))
        if self.mode == "ms" and not isinstance(v, Laurent):
            raise CharacterError(f"{self.name}: ms mode needs Laurent values")
        if self.mode == "taylor" and not isinstance(v, PolyFn):
            raise CharacterError(f"{self.name}: taylor mode needs polynomial values")
        if v.space != self.space(G):
            raise CharacterError(f"{self.name}: value does not live on the graph's momentum space")
        return v


class IdentityMap(LinearMap):
    """The unit e of the convolution: 1 on graphs without internal edges, else 0."""

    def _eval(self, G: SpecifiedGraph):
        if G.graph.is_empty or not G.graph.internal_edges:
            return self.one(G)
        return self.zero(G)


def identity_character(theory: Theory, mode: str = "taylor", D: int = 1) -> IdentityMap:
    return IdentityMap(theory, mode, D)


class LinearCombination(LinearMap):
    def __init__(self, terms: Sequence[tuple[object, LinearMap]]):
        first = terms[0][1]
        super().__init__(first.theory, first.mode, first.D)
        for _, m in terms[1:]:
            first._compatible(m)
        self.terms = list(terms)

    def _eval(self, G: SpecifiedGraph):
        out = self.zero(G)
        for c, m in self.terms:
            v = m(G)
            out = out + (v if c == 1 else -v if c == -1 else v * c)
        return out


def _subgraph_terms(G: SpecifiedGraph, theory: Theory, seed):
    subs = specified_covering_subgraphs(G, theory)
    if seed is not None:
        subs = list(subs)
        random.Random(seed).shuffle(subs)
    return subs


class Convolution(LinearMap):
    """(left * right)(G) = sum over (gamma, j) of pi[left(gamma)] i[right(G/gamma)]."""

    def __init__(self, left: LinearMap, right: LinearMap, order_seed=None):
        left._compatible(right)
        super().__init__(left.theory, left.mode, left.D)
        self.left, self.right, self.order_seed = left, right, order_seed

    def _eval(self, G: SpecifiedGraph):
        space = self.space(G)
        out = value_zero(space, self.mode)
        for sub in _subgraph_terms(G, self.theory, self.order_seed):
            a = self.left(sub.as_specified()).pull_to(space)
            b = self.right(sub.contracted()).pull_to(space)
            out = out + a * b
        return out


def convolve(chi: LinearMap, eta: LinearMap, G: SpecifiedGraph, order_seed=None):
    return Convolution(chi, eta, order_seed)(G)


class InverseSeries(LinearMap):
    """phi^{-1}(G) = sum_{n <= deg G} (e - phi)^{*n}(G), no division."""

    def __init__(self, phi: LinearMap, max_degree: int | None = None):
        super().__init__(phi.theory, phi.mode, phi.D)
        self.phi, self.max_degree = phi, max_degree
        e = IdentityMap(phi.theory, phi.mode, phi.D)
        self._diff = e - phi
        self._powers: list[LinearMap] = [e]

    def power(self, n: int) -> LinearMap:
        while len(self._powers) <= n:
            self._powers.append(Convolution(self._diff, self._powers[-1]))
        return self._powers[n]

    def _eval(self, G: SpecifiedGraph):
        deg = loop_number(G.graph)
        if self.max_degree is not None and deg > self.max_degree:
            raise CharacterError(f"graph of degree {deg} exceeds max degree {self.max_degree}")
        out = self.zero(G)
        for n in range(deg + 1):
            out = out + self.power(n)(G)
        return out


def inverse_character(phi: LinearMap, max_degree: int | None = None) -> InverseSeries:
    return InverseSeries(phi, max_degree)


class _BirkhoffPart(LinearMap):
    def __init__(self, owner: "Birkhoff", which: str):
        super().__init__(owner.phi.theory, owner.phi.mode, owner.phi.D)
        self.owner, self.which = owner, which

    def _eval(self, G: SpecifiedGraph):
        o = self.owner
        if G.graph.is_empty or loop_number(G.graph) == 0:
            return self.one(G)
        if o.extend == "multiplicative" and not G.graph.is_connected():
            return _product_over_components(self, G)
        x = o.preparation(G)
        p = o.project(x, loop_number(G.graph))
        return -p if self.which == "minus" else x - p


class Birkhoff:
    """Birkhoff decomposition phi = phi_-^{*-1} * phi_+ by the recursion

        X(G) = phi(G) + sum' pi[phi_-(gamma)] i[phi(G/gamma)]
        phi_-(G) = -P(X(G)),  phi_+(G) = (I - P)(X(G))

    where the sum runs over specified covering subgraphs other than the
    skeleton and the whole graph.  ``P`` is minimal subtraction (mode "ms")
    or Taylor truncation at the order of the graph's loop number (mode
    "taylor").  With ``extend="direct"`` the recursion is also run on
    disconnected graphs instead of using multiplicativity.
    """

    def __init__(self, phi: LinearMap, order_seed=None, extend: str = "multiplicative"):
        if extend not in ("multiplicative", "direct"):
            raise ValueError("extend must be 'multiplicative' or 'direct'")
        self.phi, self.order_seed, self.extend = phi, order_seed, extend
        self.minus = _BirkhoffPart(self, "minus")
        self.plus = _BirkhoffPart(self, "plus")
        self._prep: dict = {}

    def project(self, x, degree: int):
        return P_ms(x) if self.phi.mode == "ms" else P_taylor(degree, x)

    def preparation(self, G: SpecifiedGraph):
        """Bogoliubov's preparation X(G)."""
        key = (G.graph.key, G.spec)
        if key in self._prep:
            return self._prep[key]
        space = self.phi.space(G)
        x = self.phi(G)
        for sub in _subgraph_terms(G, self.phi.theory, self.order_seed):
            if sub.is_skeleton or sub.is_full:
                continue
            a = self.minus(sub.as_specified()).pull_to(space)
            b = self.phi(sub.contracted()).pull_to(space)
            x = x + a * b
        self._prep[key] = x
        return x

    def __call__(self, G: SpecifiedGraph):
        return self.minus(G), self.plus(G)


def birkhoff_ms(phi: LinearMap, G: SpecifiedGraph, **kw):
    if phi.mode != "ms":
        raise CharacterError("minimal subtraction needs a Laurent-valued character")
    return Birkhoff(phi, **kw)(G)


def birkhoff_taylor(phi: LinearMap, G: SpecifiedGraph, **kw):
    if phi.mode != "taylor":
        raise CharacterError("the Taylor scheme needs a polynomial-valued character")
    return Birkhoff(phi, **kw)(G)


# -- diagnostics -----------------------------------------------------------------


def shifted(G: SpecifiedGraph, v_off: int, h_off: int) -> SpecifiedGraph:
    """Order-preserving relabelling by constant offsets."""
    g = G.graph
    vmap = {v: v + v_off for v in g.vertices}
    hmap = {h: h + h_off for h in g.half_edges}
    return SpecifiedGraph(g.relabel(vmap, hmap), {r + v_off: i for r, i in G.spec})


def concatenate(G1: SpecifiedGraph, G2: SpecifiedGraph) -> tuple[SpecifiedGraph, SpecifiedGraph]:
    """Shift G2 past G1's labels; return (shifted G2, G1 G2)."""
    g1 = G1.graph
    v_off = max(g1.vertices, default=-1) + 1
    h_off = max(g1.half_edges, default=-1) + 1
    G2s = shifted(G2, v_off, h_off)
    union = disjoint_union(g1, G2s.graph)
    return G2s, SpecifiedGraph(union, {**G1.spec_map, **G2s.spec_map})


@dataclass
class CharacterReport:
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"character ok ({self.checked} checks)"
        return "\n".join(self.violations)


def verify_character(
    f: LinearMap,
    graphs: Sequence[SpecifiedGraph],
    pairs: Sequence[tuple[SpecifiedGraph, SpecifiedGraph]] = (),
) -> CharacterReport:
    """Audit the character conditions on sample graphs.

    (1) independence of the specification, (2) value on the graph's own
    momentum space, (3) value 1 without internal edges, (4) multiplicativity
    on the given pairs (and phi(empty) = 1).
    """
    from .textio import graph_code

    rep = CharacterReport()

    def fail(msg):
        rep.violations.append(msg)

    empty = SpecifiedGraph(HalfEdgeGraph({}, {}, {}, {}))
    rep.checked += 1
    if f(empty) != f.one(empty):
        fail("(4) value on the empty graph is not 1")
    for G in graphs:
        code = graph_code(G.graph, G.spec_map)
        v = f(G)
        rep.checked += 1
        if v.space != f.space(G):
            fail(f"(2) {code}: value lives on another momentum space")
        if not G.graph.internal_edges:
            rep.checked += 1
            if v != f.one(G):
                fail(f"(3) {code}: value is not 1 on a graph without internal edges")
        for H in all_specifications(G.graph, f.theory) if G.graph.internal_edges else ():
            if H.spec != G.spec:
                rep.checked += 1
                if f(H) != v:
                    fail(f"(1) {code}: value changes with the specification ({G.spec_map} vs {H.spec_map})")
        for c in G.components:
            if not c.graph.internal_edges:
                rep.checked += 1
                if f(c) != f.one(c):
                    fail(f"(3) vertex {c.graph.vertices[0]} of {code}: value is not 1")
    for G1, G2 in pairs:
        G2s, GG = concatenate(G1, G2)
        rep.checked += 1
        try:
            lhs = f(GG)
            rhs = f(G1).bullet(f(G2s))
        except GraphError as e:
            fail(f"(4) {graph_code(GG.graph)}: {e}")
            continue
        if lhs != rhs:
            fail(f"(4) not multiplicative on {graph_code(GG.graph, GG.spec_map)}")
    return rep
