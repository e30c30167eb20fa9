"""Birkhoff decomposition of a momentum-dependent character, two ways.

Minimal subtraction splits a Laurent series in z into its pole part and
the rest.  The Taylor scheme drops the monomials of degree <= L(G) in the
external momenta.  Either way phi = phi_-^(-1) * phi_+.

Run:  python3 demos/birkhoff_schemes.py
"""
from importlib.resources import files

from feynhopf import (
    Birkhoff,
    Character,
    Convolution,
    Laurent,
    P_ms,
    Poly,
    PolyFn,
    SpecifiedGraph,
    inverse_character,
    load_theory,
    loop_number,
    momentum_space,
    toy_ms,
)
from feynhopf.specified import all_specifications
from feynhopf.textio import load_graphs

phi3 = load_theory("phi3")
records = load_graphs(str(files("feynhopf.data") / "phi3.graphs"))
# a record without a spec line has exactly one admissible specification
graphs = {
    name: SpecifiedGraph(r.graph, r.spec) if r.spec else all_specifications(r.graph, phi3)[0]
    for name, r in records.items()
}


def show(B, phi, G, name):
    minus, plus = B(G)
    space = momentum_space(G.graph)
    print(f"{name} (L={loop_number(G.graph)}, coordinates {[space.name(v) for v in space.free]})")
    print(f"  phi   = {phi(G)}")
    print(f"  phi_- = {minus}")
    print(f"  phi_+ = {plus}")
    residual = Convolution(inverse_character(B.minus), B.plus)(G) - phi(G)
    assert residual.is_zero()


print("== minimal subtraction, toy character z^-L (1 + q^2 z) ==")
phi = toy_ms(phi3)
B = Birkhoff(phi)
for name in ("fish", "nested_fish"):
    show(B, phi, graphs[name], name)
    assert P_ms(B.plus(graphs[name])).is_zero()


# A hand-made polynomial character: sum of squares of the external
# coordinates plus one, raised to the loop number.
def squares(G, space):
    s = Poly.const(1)
    for x in space.external_free:
        s = s + Poly.var(x) * Poly.var(x)
    p = Poly.const(1)
    for _ in range(loop_number(G.graph)):
        p = p * s
    return PolyFn(space, p)


print("\n== Taylor scheme, (1 + sum q^2)^L ==")
phi = Character(squares, phi3, "taylor", name="squares")
B = Birkhoff(phi)
for name in ("fish", "triangle", "nested_fish"):
    G = graphs[name]
    show(B, phi, G, name)
    L = loop_number(G.graph)
    assert all(sum(e for _, e in m) > L for m in B.plus(G).poly.terms)
