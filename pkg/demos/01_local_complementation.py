"""
Local complementation and pivots on small graphs
================================================

Complementing at a vertex flips every pair inside its neighbourhood.
"""

from vmlab.graph import Graph, local_complement, pivot, to_graph6

# the path a - b - c
g = Graph.from_edges([("a", "b"), ("b", "c")], ["a", "b", "c"])
print("start      ", g.edges())

# a and c are both neighbours of b, so they become adjacent
h = local_complement(g, "b")
print("after *b   ", h.edges())

# doing it twice undoes it
print("involution ", local_complement(h, "b") == g)

# a pivot along an edge is three complementations, in either order
p = pivot(g, "a", "b")
print("pivot ab   ", p.edges())
print("graph6     ", to_graph6(p))
