"""The bialgebra of specified graphs and its Hopf quotient.

Elements are finite rational combinations of monomials.  A monomial is a
commutative product of connected specified graphs, each stored as the pair
(canonical form, specification index), so isomorphic terms collect
automatically.  The empty monomial is the unit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Union

from .canonical import canonical_form, canonical_graph
from .graph import HalfEdgeGraph, contract, covering_subgraphs, is_1pi, loop_number
from .specified import SpecifiedGraph, specified_covering_subgraphs
from .theory import Theory, is_in_theory, is_superficially_divergent

__all__ = [
    "Monomial",
    "AlgebraElement",
    "TensorSum",
    "TripleSum",
    "coproduct_tilde",
    "coproduct_hopf",
    "counit",
    "hopf_project",
    "antipode",
    "grading",
    "delta_tensor_id",
    "id_tensor_delta",
    "mult_s_id",
    "mult_id_s",
    "counit_left",
    "counit_right",
    "forget_specification",
    "coproduct_unspecified",
]


@dataclass(frozen=True, order=True)
class Monomial:
    """Sorted tuple of factors ``(connected canonical form, spec index)``."""

    factors: tuple = ()

    @classmethod
    def unit(cls) -> "Monomial":
        return cls(())

    @classmethod
    def of(cls, factors: Iterable[tuple]) -> "Monomial":
        return cls(tuple(sorted(factors)))

    @classmethod
    def from_graph(cls, G: SpecifiedGraph) -> "Monomial":
        return cls.of((canonical_form(c.graph), c.spec[0][1]) for c in G.components)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial.of(self.factors + other.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @cached_property
    def degree(self) -> int:
        return sum(_factor_degree(f) for f in self.factors)

    def graphs(self) -> tuple[SpecifiedGraph, ...]:
        return tuple(factor_graph(f) for f in self.factors)

    def project(self) -> "Monomial":
        """Image in the Hopf quotient: degree-zero factors become 1."""
        return Monomial(tuple(f for f in self.factors if _factor_degree(f) > 0))

    def __str__(self) -> str:
        from .textio import format_monomial

        return format_monomial(self)


@lru_cache(maxsize=None)
def factor_graph(factor: tuple) -> SpecifiedGraph:
    form, index = factor
    return SpecifiedGraph(canonical_graph(form), {0: index})


@lru_cache(maxsize=None)
def _factor_degree(factor: tuple) -> int:
    return loop_number(canonical_graph(factor[0]))


class _Sum:
    """Finite rational combination; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                self.add(k, c)

    def add(self, key, coeff) -> None:
        c = self.terms.get(key, 0) + Fraction(coeff)
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        out = type(self)(self.terms)
        for k, c in other.terms.items():
            out.add(k, c)
        return out

    def __neg__(self):
        return type(self)({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return type(self)({k: c * s for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def __iter__(self):
        return iter(self.items())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self.terms)} terms)"


class AlgebraElement(_Sum):
    @classmethod
    def of(cls, x: Union["AlgebraElement", Monomial, SpecifiedGraph]) -> "AlgebraElement":
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, SpecifiedGraph):
            x = Monomial.from_graph(x)
        return cls({x: 1})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls({Monomial.unit(): 1})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = AlgebraElement()
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                out.add(a * b, ca * cb)
        return out

    def __str__(self) -> str:
        from .textio import format_algebra_element

        return format_algebra_element(self)


class TensorSum(_Sum):
    @classmethod
    def one(cls) -> "TensorSum":
        u = Monomial.unit()
        return cls({(u, u): 1})

    def __mul__(self, other: "TensorSum") -> "TensorSum":
        out = TensorSum()
        for (a1, a2), ca in self.terms.items():
            for (b1, b2), cb in other.terms.items():
                out.add((a1 * b1, a2 * b2), ca * cb)
        return out

    def map(self, left=None, right=None) -> "TensorSum":
        out = TensorSum()
        for (a, b), c in self.terms.items():
            out.add((left(a) if left else a, right(b) if right else b), c)
        return out

    def __str__(self) -> str:
        from .textio import format_tensor_sum

        return format_tensor_sum(self)


class TripleSum(_Sum):
    pass


def _as_element(x) -> AlgebraElement:
    return AlgebraElement.of(x)


@lru_cache(maxsize=None)
def _delta_factor(factor: tuple, theory: Theory) -> TensorSum:
    G = factor_graph(factor)
    out = TensorSum()
    for sub in specified_covering_subgraphs(G, theory):
        out.add((Monomial.from_graph(sub.as_specified()), Monomial.from_graph(sub.contracted())), 1)
    return out


@lru_cache(maxsize=None)
def _delta_monomial(m: Monomial, theory: Theory) -> TensorSum:
    out = TensorSum.one()
    for f in m.factors:
        out = out * _delta_factor(f, theory)
    return out


def coproduct_tilde(x, theory: Theory) -> TensorSum:
    """Sum over specified covering subgraphs of gamma (x) Gamma/gamma."""
    out = TensorSum()
    for m, c in _as_element(x).terms.items():
        for k, v in _delta_monomial(m, theory).terms.items():
            out.add(k, c * v)
    return out


def hopf_project(x) -> AlgebraElement:
    """Quotient map: every internal-edge-free factor is identified with 1."""
    out = AlgebraElement()
    for m, c in _as_element(x).terms.items():
        out.add(m.project(), c)
    return out


def _project_tensor(ts: TensorSum) -> TensorSum:
    return ts.map(Monomial.project, Monomial.project)


def coproduct_hopf(x, theory: Theory) -> TensorSum:
    """Coproduct of the Hopf quotient: project both legs of the tilde coproduct."""
    return _project_tensor(coproduct_tilde(x, theory))


def counit(x) -> Fraction:
    """1 on monomials whose factors all lack internal edges, 0 otherwise."""
    return sum(
        (c for m, c in _as_element(x).terms.items() if m.degree == 0),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def _antipode_factor(factor: tuple, theory: Theory) -> AlgebraElement:
    m = Monomial((factor,))
    one = Monomial.unit()
    delta = coproduct_hopf(m, theory)
    if delta.terms.get((m, one)) != 1:
        raise ValueError("antipode recursion needs the term Gamma (x) 1 with coefficient 1")
    out = AlgebraElement()
    for (left, right), c in delta.terms.items():
        if (left, right) == (m, one):
            continue
        out = out - (_antipode_monomial(left, theory) * AlgebraElement({right: 1})).scale(c)
    return out


def _antipode_monomial(m: Monomial, theory: Theory) -> AlgebraElement:
    out = AlgebraElement.one()
    for f in m.project().factors:
        out = out * _antipode_factor(f, theory)
    return out


def antipode(x, theory: Theory) -> AlgebraElement:
    """Antipode of the Hopf quotient (input is projected first)."""
    out = AlgebraElement()
    for m, c in hopf_project(x).terms.items():
        out = out + _antipode_monomial(m, theory).scale(c)
    return out


def grading(x) -> dict[int, AlgebraElement]:
    """Split by total loop number."""
    out: dict[int, AlgebraElement] = {}
    for m, c in _as_element(x).terms.items():
        out.setdefault(m.degree, AlgebraElement()).add(m, c)
    return dict(sorted(out.items()))


def _delta(m: Monomial, theory: Theory, hopf: bool) -> TensorSum:
    d = _delta_monomial(m, theory)
    return _project_tensor(d) if hopf else d


def delta_tensor_id(ts: TensorSum, theory: Theory, hopf: bool = False) -> TripleSum:
    out = TripleSum()
    for (a, b), c in ts.terms.items():
        for (a1, a2), c2 in _delta(a, theory, hopf).terms.items():
            out.add((a1, a2, b), c * c2)
    return out


def id_tensor_delta(ts: TensorSum, theory: Theory, hopf: bool = False) -> TripleSum:
    out = TripleSum()
    for (a, b), c in ts.terms.items():
        for (b1, b2), c2 in _delta(b, theory, hopf).terms.items():
            out.add((a, b1, b2), c * c2)
    return out


def counit_left(ts: TensorSum) -> AlgebraElement:
    """(counit (x) id)"""
    out = AlgebraElement()
    for (a, b), c in ts.terms.items():
        if a.degree == 0:
            out.add(b, c)
    return out


def counit_right(ts: TensorSum) -> AlgebraElement:
    """(id (x) counit)"""
    out = AlgebraElement()
    for (a, b), c in ts.terms.items():
        if b.degree == 0:
            out.add(a, c)
    return out


def mult_s_id(ts: TensorSum, theory: Theory) -> AlgebraElement:
    """m (S (x) id)"""
    out = AlgebraElement()
    for (a, b), c in ts.terms.items():
        out = out + (_antipode_monomial(a, theory) * hopf_project(AlgebraElement({b: 1}))).scale(c)
    return out


def mult_id_s(ts: TensorSum, theory: Theory) -> AlgebraElement:
    """m (id (x) S)"""
    out = AlgebraElement()
    for (a, b), c in ts.terms.items():
        out = out + (hopf_project(AlgebraElement({a: 1})) * _antipode_monomial(b, theory)).scale(c)
    return out


@lru_cache(maxsize=None)
def _forget_factor(factor: tuple) -> tuple:
    g = factor_graph(factor).forget().graph
    return (canonical_form(g), 0)


def forget_specification(x):
    """Drop refined indices and specifications from every factor."""

    def fm(m: Monomial) -> Monomial:
        return Monomial.of(_forget_factor(f) for f in m.factors)

    if isinstance(x, TensorSum):
        return x.map(fm, fm)
    out = AlgebraElement()
    for m, c in _as_element(x).terms.items():
        out.add(fm(m), c)
    return out


def _plain_monomial(g: HalfEdgeGraph) -> Monomial:
    g = g.with_vertex_indices({v: 0 for v in g.vertices})
    return Monomial.of((canonical_form(c), 0) for c in g.component_graphs)


def coproduct_unspecified(g: HalfEdgeGraph, theory: Theory) -> TensorSum:
    """Coproduct on plain graphs, refined indices ignored.

    Sums over covering subgraphs whose components are 1PI and superficially
    divergent (edgeless components excepted) and whose contraction is in the
    theory.  Monomials carry spec 0, matching ``forget_specification``.
    """
    out = TensorSum()
    for sub in covering_subgraphs(g):
        sg = sub.graph
        if not all(
            not c.internal_edges or (is_1pi(c) and is_superficially_divergent(c, theory))
            for c in sg.component_graphs
        ):
            continue
        q = contract(g, sub)
        if not is_in_theory(q, theory):
            continue
        out.add((_plain_monomial(sg), _plain_monomial(q)), 1)
    return out
