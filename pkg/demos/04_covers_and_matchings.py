"""
Bijections from path covers and matchings
=========================================

Any triangulation with a cover by p paths maps onto G2 keeping at least
n - p - 2 edges; a maximum matching gives another cheap lower bound.
"""

from triflip.constructions import build_g1, build_g2
from triflip.covers import matching_mapping, max_matching, path_cover, path_cover_mapping

for n in (12, 60, 300):
    g1, g2 = build_g1(n).base, build_g2(n)
    pc = path_cover(g1)
    pm = path_cover_mapping(g1, pc, g2)
    print(f"n={n}: {pc.p} paths, common edges {pm.gamma.c} (guaranteed {pm.guarantee})")
    m = matching_mapping(g1, g2)
    print(f"       matching size {len(max_matching(g1))}, matching bijection keeps {m.c}")
