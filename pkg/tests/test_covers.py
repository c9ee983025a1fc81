import random

import pytest

from triflip.bounds import common_edges
from triflip.constructions import build_g1, build_g2
from triflip.covers import (
    Matching,
    PathCover,
    exhaustive_max_matching,
    matching_mapping,
    max_matching,
    min_path_cover,
    path_cover,
    path_cover_mapping,
)
from test_kernel import random_walk


@pytest.mark.parametrize("n", [4, 5, 10, 57])
def test_g2_is_hamiltonian(n):
    g = build_g2(n)
    pc = path_cover(g)
    pc.check(g)
    assert pc.p == 1


def test_octahedron_exact_cover(octahedron):
    assert min_path_cover(octahedron).p == 1


def test_heuristic_dominated_by_exact(catalog_tris):
    for t in catalog_tris(9):
        exact = min_path_cover(t)
        exact.check(t)
        assert path_cover(t).p >= exact.p


def test_cover_invalid_detected(octahedron):
    with pytest.raises(ValueError):
        PathCover(((0, 2), (1, 3, 4, 5))).check(octahedron)
    with pytest.raises(ValueError):
        PathCover(((0, 1),)).check(octahedron)


def test_g1_cover_large():
    g = build_g1(300)
    pc = path_cover(g.base)
    pc.check(g.base)
    # red vertices are independent, so no cover can do better than this
    assert pc.p >= (300 - 2 * g.num_blue)


def test_matching_small(octahedron, k4):
    assert len(max_matching(octahedron)) == 3
    assert len(max_matching(k4)) == 2
    with pytest.raises(ValueError):
        Matching(((0, 1), (1, 2))).check(k4)


def test_matching_against_exhaustive():
    rng = random.Random(4)
    for n in (7, 9, 12, 16):
        t = random_walk(build_g1(n).base if n >= 6 else build_g2(n), 3 * n, rng)
        m = max_matching(t)
        m.check(t)
        assert len(m) == exhaustive_max_matching(t)


def test_n5_matching_below_cited_constant():
    # the (n + 4) / 3 bound needs n >= 6: the bipyramid only has a matching of size 2
    assert len(max_matching(build_g2(5))) == 2 < (5 + 4) / 3


def test_path_cover_mapping_hamiltonian():
    for n in (6, 10, 30):
        g = build_g2(n)
        pm = path_cover_mapping(g, path_cover(g), g)
        assert pm.gamma.c >= n - 3


def test_path_cover_mapping_g1_12():
    g1, g2 = build_g1(12).base, build_g2(12)
    pc = path_cover(g1)
    pm = path_cover_mapping(g1, pc, g2)
    assert pm.gamma.c == common_edges(g1, g2, pm.gamma)
    assert pm.gamma.c >= 12 - pc.p - 2


def test_path_cover_mapping_singletons_go_to_apexes(octahedron):
    cover = PathCover(((0,), (2,), (1, 4, 3, 5)))
    pm = path_cover_mapping(octahedron, cover, build_g2(6))
    assert set(pm.apex_vertices) == {0, 2}
    assert pm.gamma.c >= 6 - 3 - 2


def test_path_cover_mapping_checks_g2(octahedron, stacked6):
    with pytest.raises(ValueError):
        path_cover_mapping(stacked6, path_cover(stacked6), octahedron)


def test_matching_mapping(octahedron, stacked6):
    g = matching_mapping(octahedron, stacked6)
    k = min(len(max_matching(octahedron)), len(max_matching(stacked6)))
    assert g.c == common_edges(octahedron, stacked6, g) >= k
    same = matching_mapping(octahedron, octahedron)
    assert same.c >= len(max_matching(octahedron))


def test_matching_mapping_catalog_pairs(catalog_tris):
    for n in range(6, 9):
        tris = catalog_tris(n)
        for a in tris:
            for b in tris:
                g = matching_mapping(a, b)
                assert g.c >= min(len(max_matching(a)), len(max_matching(b)))
