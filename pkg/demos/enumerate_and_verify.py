"""Enumerate the small divergent graphs of phi^4 and run the invariant
suite over every admissible specification of them.

Run:  python3 demos/enumerate_and_verify.py
"""
from feynhopf import load_theory, loop_number
from feynhopf.enumerate import count_by_degree, enumerate_graphs
from feynhopf.specified import all_specifications
from feynhopf.textio import graph_code
from feynhopf.verify import run_suite

phi4 = load_theory("phi4")
graphs = enumerate_graphs(phi4, max_loops=2, max_half_edges=12)
print(f"{len(graphs)} graphs up to two loops, by loop number: {count_by_degree(graphs)}")
for g in [g for g in graphs if loop_number(g) == 1][:5]:
    print("  ", graph_code(g))

specified = [G for g in graphs for G in all_specifications(g, phi4)]
print(f"{len(specified)} specified graphs")

for r in run_suite(specified, phi4, seed=7):
    print(r.line())
