"""
The two far-apart triangulations
================================

G1 has bounded degree and a large independent set of degree-3 vertices;
G2 has two apexes adjacent to everything.  Few edges can line up between
them, whatever the vertex bijection.
"""

from triflip.bounds import theorem_bound
from triflip.constructions import build_g1, build_g2, check_lemma2_structure, host_spec
from triflip.kernel import max_degree

n = 1000
g1 = build_g1(n)
g2 = build_g2(n)
print(host_spec(g1.num_blue))
print("G1 max degree", max_degree(g1.base), "blue", g1.num_blue, "red", n - g1.num_blue)
print("G2 max degree", max_degree(g2))

report = check_lemma2_structure(g1)
print(report)

# flips needed between G1 and G2, against the linear relaxation
for n in (15, 30, 100, 1000, 10**6):
    tb = theorem_bound(n)
    print(n, tb.value, tb.relaxed)
