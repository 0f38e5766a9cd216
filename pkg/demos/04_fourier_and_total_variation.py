"""
How close to uniform is the induced graph?
==========================================

The exact law of the change on U is computed for a fixed G[W], its Fourier
coefficients are compared with the rank-based bound, and the total
variation distance to the uniform law is bounded through the spectrum.
"""

import numpy as np

from vmlab.gfourier import (
    claim34_bound,
    coupled_final_distribution,
    delta_distribution_exact,
    fourier_transform,
    fourier_tv_bound,
    tv_to_uniform,
)
from vmlab.graph import Graph
from vmlab.harness import sample_gnp
from vmlab.lcdelta import LCInstance

s, r, p = 3, 7, 0.3
gw = sample_gnp(r, 0.5, 11)
labels = [f"w{i}" for i in range(r)] + [f"u{i}" for i in range(s)]
g = Graph.from_edges([(f"w{i}", f"w{j}") for i, j in gw.edges()], labels)
inst = LCInstance(g, labels[r:], labels[:r])

d = delta_distribution_exact(inst, p)
spec = fourier_transform(d)
for code in range(1, d.probs.size):
    F = Graph.from_edge_bitmask(code, s)
    print(f"F={F.edges()!s:28} |mu^(F)|={abs(spec[code]):.4f}  bound={claim34_bound(F, r, 0.3):.4f}")

print("TV to uniform       ", tv_to_uniform(d))
print("Fourier upper bound ", fourier_tv_bound(d))

# the final induced graph mixes in the original G[U] ~ G(3, p)
final = coupled_final_distribution(d, p)
print("final TV            ", tv_to_uniform(final))
print("edge marginals      ", np.round([final.edge_marginal(k) for k in range(3)], 4))
