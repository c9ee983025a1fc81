import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from triflip.bounds import (
    MaxCommonResult,
    VertexBijection,
    common_edges,
    exhaustive_max_common_edges,
    lemma1_bound,
    local_search,
    max_common_edges,
    theorem_bound,
    theorem_bound_violations,
)
from triflip.constructions import build_g1, build_g2
from triflip.kernel import flip, is_flippable
from test_kernel import random_walk


def intersect_oracle(g1, g2, fwd):
    mapped = {tuple(sorted((fwd[u], fwd[v]))) for u, v in g1.edge_set}
    return len(mapped & g2.edge_set)


def test_identity_shares_all_edges(octahedron):
    assert common_edges(octahedron, octahedron, range(6)) == 12


def test_hand_built_pair(octahedron, stacked6):
    fwd = (3, 1, 4, 0, 5, 2)
    assert common_edges(octahedron, stacked6, fwd) == intersect_oracle(octahedron, stacked6, fwd)


def test_common_edges_errors(octahedron, k4):
    with pytest.raises(ValueError):
        common_edges(octahedron, k4, range(6))
    with pytest.raises(ValueError):
        common_edges(octahedron, octahedron, [0, 0, 1, 2, 3, 4])
    with pytest.raises(ValueError):
        VertexBijection((0, 0, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 30), st.integers(0, 2**32 - 1))
def test_common_edges_matches_set_oracle(n, seed):
    rng = random.Random(seed)
    g1 = random_walk(build_g2(n), 2 * n, rng)
    g2 = random_walk(build_g1(n).base, 2 * n, rng)
    fwd = list(range(n))
    rng.shuffle(fwd)
    assert common_edges(g1, g2, fwd) == intersect_oracle(g1, g2, fwd)


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 30), st.integers(0, 2**32 - 1))
def test_one_flip_changes_count_by_at_most_one(n, seed):
    rng = random.Random(seed)
    g1 = random_walk(build_g2(n), 2 * n, rng)
    g2 = random_walk(build_g2(n), 3 * n, rng)
    fwd = list(range(n))
    rng.shuffle(fwd)
    before = common_edges(g1, g2, fwd)
    u = rng.randrange(n)
    v = rng.choice(g1.rotation[u])
    if is_flippable(g1, u, v):
        assert abs(common_edges(flip(g1, u, v), g2, fwd) - before) <= 1


def test_witness_format_round_trip():
    g = VertexBijection((2, 0, 1), 5)
    assert VertexBijection.parse(g.format()) == g
    assert g.format().splitlines()[0] == "c=5"


def test_max_common_isomorphic(octahedron):
    r = max_common_edges(octahedron, octahedron)
    assert r.exact and r.lower == 12


def test_max_common_octahedron_vs_stacked(octahedron, stacked6):
    r = max_common_edges(octahedron, stacked6)
    e = exhaustive_max_common_edges(octahedron, stacked6)
    assert r.exact and r.lower == e.lower == 11  # exhaustive 6! oracle
    assert r.witness.c == common_edges(octahedron, stacked6, r.witness)


def test_max_common_g1_g2_9():
    g1, g2 = build_g1(9).base, build_g2(9)
    r = max_common_edges(g1, g2)
    assert r.exact and r.lower == 19  # exhaustive 9! oracle, frozen
    assert r.lower <= 2 * 3 + 28 and r.lower <= 21


@pytest.mark.slow
def test_exhaustive_g1_g2_9():
    g1, g2 = build_g1(9).base, build_g2(9)
    assert exhaustive_max_common_edges(g1, g2).lower == 19


def test_budget_keeps_bounds_sound():
    g1, g2 = build_g1(11).base, build_g2(11)
    exact = max_common_edges(g1, g2)
    cut = max_common_edges(g1, g2, node_limit=5)
    assert cut.lower <= exact.lower <= cut.upper
    assert lemma1_bound(g1, g2, cut).value <= lemma1_bound(g1, g2, exact).value
    assert cut.witness.c == common_edges(g1, g2, cut.witness)


def test_time_budget():
    g1, g2 = build_g1(12).base, build_g2(12)
    r = max_common_edges(g1, g2, budget_ms=1)
    assert r.lower <= r.upper <= 3 * 12 - 6


def test_local_search_deterministic():
    g1, g2 = build_g1(15).base, build_g2(15)
    assert local_search(g1, g2) == local_search(g1, g2)


def test_workers_agree():
    g1, g2 = build_g1(9).base, build_g2(9)
    a = max_common_edges(g1, g2, workers=1)
    b = max_common_edges(g1, g2, workers=2)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_lemma1_isomorphic(octahedron):
    r = max_common_edges(octahedron, octahedron)
    assert lemma1_bound(octahedron, octahedron, r).value == 0


def test_lemma1_uses_upper(octahedron, stacked6):
    fake = MaxCommonResult(5, 11, VertexBijection(tuple(range(6)), 5))
    b = lemma1_bound(octahedron, stacked6, fake)
    assert b.value == 1 and not b.exact


@pytest.mark.parametrize(
    "n, value, relaxed", [(30, 36, Fraction(36)), (15, 1, Fraction(1)), (14, 0, Fraction(-4, 3))]
)
def test_theorem_bound_values(n, value, relaxed):
    tb = theorem_bound(n)
    assert tb.value == value and tb.relaxed == relaxed and tb.holds


def test_theorem_bound_tight_when_divisible_by_3():
    for n in range(3, 300, 3):
        assert theorem_bound(n).value == theorem_bound(n).relaxed


def test_theorem_violation_sweep_small():
    assert theorem_bound_violations(1000).size == 0
    assert all(theorem_bound(n).holds for n in range(3, 1000))


def test_g1_g2_analytic_bound_matches_theorem():
    for n in range(6, 200):
        tb = theorem_bound(n)
        fake = MaxCommonResult(0, 2 * (n // 3) + 28, VertexBijection(tuple(range(n)), None))
        g = build_g2(n)
        if fake.upper <= 3 * n - 6:
            assert lemma1_bound(g, g, fake).value == tb.value
        assert tb.value >= Fraction(7 * n, 3) - 34
