"""Coproduct and antipode of a nested self-energy graph in phi^3.

Run:  python3 demos/coproduct_walkthrough.py
"""
from importlib.resources import files

from feynhopf import (
    SpecifiedGraph,
    antipode,
    coproduct_hopf,
    coproduct_tilde,
    coproduct_unspecified,
    forget_specification,
    load_theory,
    specified_covering_subgraphs,
)
from feynhopf.hopf import mult_s_id
from feynhopf.textio import format_algebra_element, format_tensor_sum, load_graphs

phi3 = load_theory("phi3")
records = load_graphs(str(files("feynhopf.data") / "phi3.graphs"))

rec = records["nested_fish"]
G = SpecifiedGraph(rec.graph, rec.spec)
print(f"nested_fish: {len(rec.graph.vertices)} vertices, spec {G.spec_map}")

# The one-loop fish inside can shrink to a 2-point vertex of index 0 or 1,
# so it shows up twice.
subs = specified_covering_subgraphs(G, phi3)
print(f"{len(subs)} specified covering subgraphs")
for s in subs:
    print(f"  kept edges {sorted(s.kept)}  indices {dict(s.spec)}")

d = coproduct_tilde(G, phi3)
print("\ntilde coproduct:")
print(format_tensor_sum(d))

print("\nhopf coproduct (trivial factors dropped):")
print(format_tensor_sum(coproduct_hopf(G, phi3)))

# Forgetting the indices merges the twin terms into one with coefficient 2.
print("\nforgotten:")
print(format_tensor_sum(forget_specification(d)))

rec2 = records["two_triangles"]
print("\nunspecified coproduct of two_triangles:")
print(format_tensor_sum(coproduct_unspecified(rec2.graph, phi3)))

S = antipode(G, phi3)
print("\nantipode:")
print(format_algebra_element(S))

# m(S x id)D kills everything of positive degree.
check = mult_s_id(coproduct_hopf(G, phi3), phi3)
print("\nm(S x id)D(G) =", format_algebra_element(check) or "0")
assert len(check) == 0
