"""Test-fixture characters and characters tabulated from files.

These are fixtures for exercising the algebra, not Feynman rules.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .canonical import automorphism_generators, canonical_form, find_isomorphism
from .graph import loop_number
from .momenta import MomentumSpace, PolyFn
from .poly import Poly, PolyParseError
from .renorm import Character, CharacterError
from .schemes import Laurent
from .specified import SpecifiedGraph
from .textio import CharacterFile, TextFormatError, graph_code
from .theory import Theory

__all__ = ["toy_ms", "toy_taylor", "random_character", "tabulated_character", "builtin_character"]


def _q(space: MomentumSpace) -> Poly:
    return Poly.var(space.external_free[0]) if space.external_free else Poly()


def toy_ms(theory: Theory, D: int = 1) -> Character:
    """phi(G) = z^-L (1 + q^2 z), q the first external free coordinate (0 if none)."""

    def gen(G: SpecifiedGraph, space: MomentumSpace):
        L = loop_number(G.graph)
        q = _q(space)
        return Laurent({-L: space.one(), 1 - L: PolyFn(space, q * q)}, space)

    return Character(gen, theory, "ms", D, name="toy-ms")


def toy_taylor(theory: Theory, D: int = 1) -> Character:
    """phi(G) = product over external free coordinates x of (x + 1)."""

    def gen(G: SpecifiedGraph, space: MomentumSpace):
        p = Poly.const(1)
        for x in space.external_free:
            p = p * (Poly.var(x) + 1)
        return PolyFn(space, p)

    return Character(gen, theory, "taylor", D, name="toy-taylor")


def _random_poly(rng: random.Random, variables, max_degree: int = 2) -> Poly:
    p = Poly.const(rng.choice([1, 2, -1, Fraction(1, 2), 3]))
    for _ in range(rng.randint(1, 3)):
        if not variables:
            break
        mono = {}
        for _ in range(rng.randint(1, max_degree)):
            v = rng.choice(variables)
            mono[v] = mono.get(v, 0) + 1
        p = p + Poly({tuple(mono.items()): rng.choice([1, -1, 2, Fraction(-1, 3), Fraction(3, 2)])})
    return p


def random_character(theory: Theory, seed: int, mode: str = "taylor", D: int = 1) -> Character:
    """Pseudo-random values, a function of (seed, labelled graph) only.

    Values are low-degree polynomials in the free coordinates (and, in ms
    mode, Laurent in z with poles up to the loop number).
    """

    def gen(G: SpecifiedGraph, space: MomentumSpace):
        rng = random.Random(f"{seed}:{G.graph.key!r}")
        free = list(space.free)
        if mode == "taylor":
            return PolyFn(space, _random_poly(rng, free))
        L = loop_number(G.graph)
        terms = {n: PolyFn(space, _random_poly(rng, free)) for n in range(-L, 2) if rng.random() < 0.8}
        return Laurent(terms or {-L: space.one()}, space)

    return Character(gen, theory, mode, D, name=f"random-{seed}")


def builtin_character(name: str, theory: Theory, mode: str, D: int = 1) -> Character:
    """``toy`` or ``random:<seed>``."""
    if name == "toy":
        return toy_ms(theory, D) if mode == "ms" else toy_taylor(theory, D)
    if name.startswith("random:"):
        return random_character(theory, int(name[7:]), mode, D)
    raise CharacterError(f"unknown built-in character {name!r}")


def _rename(p: Poly, hmap: dict) -> Poly:
    return p.rename(lambda v: (hmap[v[0]], v[1]))


def tabulated_character(cf: CharacterFile, records: dict, theory: Theory, D: int = 1) -> Character:
    """Character from a file of values on named connected graphs.

    Values are written in the named graph's raw momenta ``p<h>`` (``p<h>_<k>``
    when D > 1).  A value is carried to any isomorphic labelled graph along
    an isomorphism, so it must be invariant under the automorphisms of its
    graph; otherwise the transport would depend on the chosen isomorphism.
    """
    table = {}
    for gname, (text, line, source) in cf.values.items():
        if gname not in records:
            raise TextFormatError(f"value for unknown graph {gname!r}", line, source)
        g = records[gname].graph
        if not g.is_connected():
            raise TextFormatError(f"graph {gname!r} is not connected", line, source)
        space = MomentumSpace(g, D)
        try:
            if cf.mode == "ms":
                val = Laurent.parse(text, space)
                polys = dict(val.terms)
            else:
                val = PolyFn(space, space.reduce(Poly.parse(text, space.names)))
                polys = {0: val}
        except (PolyParseError, ValueError) as e:
            raise TextFormatError(f"value of {gname!r}: {e}", line, source) from None
        for perm in automorphism_generators(g):
            for f in polys.values():
                if space.reduce(_rename(f.poly, perm)) != f.poly:
                    raise CharacterError(
                        f"value of {gname!r} is not invariant under the automorphisms of its graph"
                    )
        form = canonical_form(g)
        if form in table:
            raise CharacterError(f"graphs {table[form][0]!r} and {gname!r} are isomorphic")
        table[form] = (gname, g, polys)

    def gen(G: SpecifiedGraph, space: MomentumSpace):
        form = canonical_form(G.graph)
        if form not in table:
            raise CharacterError(f"no value for graph {graph_code(G.graph)} (canonical form {form!r})")
        _, g, polys = table[form]
        _, hmap = find_isomorphism(g, G.graph)
        out = {n: PolyFn(space, space.reduce(_rename(f.poly, hmap))) for n, f in polys.items()}
        return Laurent(out, space) if cf.mode == "ms" else out[0]

    return Character(gen, theory, cf.mode, D, name=cf.name)
