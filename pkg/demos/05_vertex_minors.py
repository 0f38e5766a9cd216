"""
Vertex-minors and universality
==============================

Breadth-first search over the local-complementation orbit decides whether a
small graph is a vertex-minor of another, and whether every graph on every
k-subset appears.
"""

from vmlab.graph import Graph
from vmlab.vminor import is_k_vm_universal, is_vertex_minor, lc_orbit

cycle = Graph.from_edges([(i, (i + 1) % 5) for i in range(5)], 5)
orb = lc_orbit(cycle)
print("C5 orbit size:", len(orb), "layers:", orb.layers)

target = Graph.from_edges([(0, 2)], [0, 2])
dec = is_vertex_minor(cycle, Graph.empty([0, 2]))
print("empty graph on {0,2}:", dec.verdict, "word:", dec.word)
print("edge on {0,2}:      ", is_vertex_minor(cycle, target).verdict)

for k in (2, 3):
    res = is_k_vm_universal(cycle, k)
    print(f"C5 is {k}-universal:", res.verdict, "counterexample:", res.counterexample)
