"""
Predicting the change on U from one matrix
==========================================

Complementing at every vertex of W changes the graph induced on U.  The
change is determined by the W-to-U edges X and a symmetric matrix M built
from G[W] alone.
"""

import numpy as np

from vmlab.harness import sample_gnp
from vmlab.lcdelta import LCInstance, delta_via_m, sequential_delta

rng = np.random.default_rng(3)
g = sample_gnp(14, 0.4, rng)
order = [int(v) for v in rng.permutation(14)]
inst = LCInstance(g, sorted(order[9:]), order[:9])

cert = delta_via_m(inst)
print("U =", list(inst.u_set), " W order =", list(inst.w_order))
print("M =")
print(cert.m.to_array())

# the slow way: actually run the nine complementations
print("matches simulation:", cert.delta == sequential_delta(inst))
print("structural checks: ", cert.check())
