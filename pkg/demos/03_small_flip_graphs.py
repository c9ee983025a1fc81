"""
Exact flip graphs for small n
=============================

"""

import itertools
import time

from triflip.bounds import lemma1_bound, max_common_edges
from triflip.constructions import build_g1, build_g2
from triflip.flipgraph import diameter, distance, distances_from, enumerate_flip_graph

catalogs = {}
for n in range(4, 11):
    t0 = time.perf_counter()
    cat = catalogs[n] = enumerate_flip_graph(n)
    d, _ = diameter(cat)
    print(f"n={n:2d} nodes={cat.num_nodes:4d} edges={cat.num_edges:5d} diameter={d} "
          f"({time.perf_counter() - t0:.1f}s)")

# the common-edge bound never exceeds the true flip distance
cat = catalogs[8]
tris = [cat.triangulation(i) for i in range(cat.num_nodes)]
gaps = []
for i, j in itertools.combinations(range(len(tris)), 2):
    mc = max_common_edges(tris[i], tris[j])
    gaps.append(distances_from(cat, i)[j] - lemma1_bound(tris[i], tris[j], mc).value)
print("n=8: min slack", min(gaps), "max slack", max(gaps))

for n in range(6, 11):
    g1, g2 = build_g1(n).base, build_g2(n)
    mc = max_common_edges(g1, g2)
    print(n, "G1 vs G2: max common", mc.upper, "lower bound", lemma1_bound(g1, g2, mc).value,
          "distance", distance(catalogs[n], g1, g2))
