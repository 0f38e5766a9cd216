"""
Pivoting in bipartite graphs
============================

A pivot along an edge of a bipartite graph swaps its two ends between the
sides.  Pairs chosen from an invertible block of the biadjacency matrix stay
edges throughout a pivot sequence.
"""

from vmlab.bippivot import bipartite_delta_via_m, find_pivot_pairs, rank_tail_bound, rank_tail_experiment
from vmlab.f2core import rank
from vmlab.harness import sample_bipartite

g = sample_bipartite(8, 8, 0.5, seed=4)
pp = find_pivot_pairs(g)
print("rank of the biadjacency:", rank(g.biadj))
print("pairs:", pp.pairs)
print("every step certified:   ", pp.ok)

res = bipartite_delta_via_m(g, g.left[:3], g.right[:3])
print("change on U_L x U_R:")
print(res.delta.to_array())
print("sum form holds:", res.sum_holds, " M form holds:", res.m_holds)

tail = rank_tail_experiment(40, 0.3, 2000, seed=1)
print("rank <= 20 frequency", tail.frequency, "bound", rank_tail_bound(40, 0.3, 20))
