"""
Biased sign expectations and the rank census
============================================

A quadratic polynomial over F2 with high rank has a sign expectation close
to zero under a p-biased input.  The rank census counts graphs by the F2
rank of their adjacency matrix.
"""

from vmlab.quadpoly import QuadPoly, lemma21_bound, sign_expectation_exact
from vmlab.rankcensus import census_bound, census_exhaustive, census_formula

for t in range(1, 7):
    f = QuadPoly.from_terms(2 * t, [(2 * i, 2 * i + 1) for i in range(t)])
    for p in (0.2, 0.5):
        val = sign_expectation_exact(f, p)
        print(f"t={t} p={p}: E = {val:.5f}  bound = {lemma21_bound(f, p):.5f}")

print()
print("s=4 by enumeration:", census_exhaustive(4).counts)
for s in (8, 16):
    row = {a: census_formula(s, a) for a in range(0, s + 1, 2)}
    print(f"s={s}:", row)
    print("   bound holds:", all(census_formula(s, a) <= census_bound(s, a) for a in range(1, s + 1)))
