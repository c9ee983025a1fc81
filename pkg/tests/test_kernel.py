import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import isomorphic_embeddings
from triflip.constructions import build_g1, build_g2
from triflip.kernel import (
    CanonicalCode,
    InvalidFlipError,
    NotAnEdgeError,
    ParseError,
    SequenceError,
    Triangulation,
    ValidationError,
    apply_sequence,
    canonical_code,
    degree,
    edges,
    faces,
    flip,
    flip_partner,
    format_rotation,
    from_code,
    is_flippable,
    max_degree,
    mirror,
    parse,
    relabel,
)
from conftest import K4_TEXT, OCTAHEDRON_TEXT


def random_walk(t, steps, rng):
    for _ in range(steps):
        u = rng.randrange(t.n)
        v = rng.choice(t.rotation[u])
        if is_flippable(t, u, v):
            t = flip(t, u, v)
    return t


# -- parsing -----------------------------------------------------------------

def test_parse_k4(k4):
    assert k4.n == 4
    assert len(edges(k4)) == 6
    assert len(faces(k4)) == 4


def test_parse_octahedron(octahedron):
    assert octahedron.n == 6
    assert len(edges(octahedron)) == 12
    assert len(faces(octahedron)) == 8


def test_format_round_trip(octahedron):
    assert format_rotation(octahedron) == OCTAHEDRON_TEXT
    assert parse(format_rotation(octahedron)) == octahedron


def test_comments_skipped():
    assert parse(K4_TEXT).n == 4


@pytest.mark.parametrize(
    "text, kind",
    [
        ("n 4\n0 : 1 3 2 1\n1 : 0 2 3\n2 : 0 3 1\n3 : 0 1 2\n", "duplicate-neighbor"),
        ("n 4\n0 : 1 0 2\n1 : 0 2 3\n2 : 0 3 1\n3 : 1 2\n", "self-loop"),
        ("n 4\n0 : 1 3 2\n1 : 0 2\n2 : 0 3 1\n3 : 0 1 2\n", "asymmetric"),
        ("n 4\n0 : 1 2 3\n1 : 0 2 3\n2 : 0 3 1\n3 : 0 1 2\n", "non-triangular-face"),
        ("n 5\n0 : 1 3 2\n1 : 0 2 3\n2 : 0 3 1\n3 : 0 1 2\n4 : \n", None),
    ],
)
def test_validation_errors(text, kind):
    with pytest.raises((ValidationError, ParseError)) as info:
        parse(text)
    if kind is not None:
        assert info.value.kind == kind


def test_edge_count_error():
    # two disjoint-ish lists that are symmetric but too few edges
    with pytest.raises(ValidationError) as info:
        Triangulation([[1, 2], [0, 2], [0, 1], [4, 5], [3, 5], [3, 4]])
    assert info.value.kind == "edge-count"


def test_too_small():
    with pytest.raises(ValidationError) as info:
        Triangulation([[1, 2], [2, 0], [0, 1]])
    assert info.value.kind == "too-small"


@pytest.mark.parametrize(
    "text, line",
    [
        ("n x\n", 1),
        ("0 : 1 2\n", 1),
        ("n 4\n0 : 1 3 2\n1 : 0 2 3\n2 0 3 1\n3 : 0 1 2\n", 4),
        ("n 4\n0 : 1 3 2\n1 : 0 2 3\n2 : 0 3 1\n", 5),
        ("n 4\n0 : 1 3 q\n", 2),
    ],
)
def test_syntax_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == line


def test_syntax_error_column():
    with pytest.raises(ParseError) as info:
        parse("n 4\n0 : 1 3 q\n")
    assert info.value.column == 9


# -- faces and accessors -----------------------------------------------------

def test_faces_use_every_dart_once(octahedron):
    darts = [(f[i], f[(i + 1) % 3]) for f in faces(octahedron) for i in range(3)]
    assert len(darts) == len(set(darts)) == 2 * 12


@pytest.mark.parametrize("n", [4, 5, 9, 30])
def test_face_count_euler(n):
    assert len(faces(build_g2(n))) == 2 * n - 4


def test_degrees(octahedron, k4):
    assert all(degree(octahedron, v) == 4 for v in range(6))
    assert all(degree(k4, v) == 3 for v in range(4))
    g2 = build_g2(12)
    assert degree(g2, 10) == degree(g2, 11) == 11
    assert sum(degree(g2, v) for v in range(12)) == 2 * (3 * 12 - 6)
    assert max_degree(octahedron) == 4
    with pytest.raises(KeyError):
        degree(k4, 4)


# -- flips -------------------------------------------------------------------

def test_k4_is_flip_rigid(k4):
    for u, v in edges(k4):
        with pytest.raises(InvalidFlipError) as info:
            flip(k4, u, v)
        assert info.value.triangulation is k4


def test_flip_not_an_edge(octahedron):
    with pytest.raises(NotAnEdgeError):
        flip(octahedron, 0, 2)


def test_octahedron_flip(octahedron):
    t = flip(octahedron, 0, 1)
    t.validate()
    assert sorted(t.degrees.tolist()) == [3, 3, 4, 4, 5, 5]
    assert canonical_code(t) != canonical_code(octahedron)
    assert octahedron.has_edge(0, 1)  # input untouched


def test_flip_involution(octahedron):
    for u, v in edges(octahedron):
        c, d = flip_partner(octahedron, u, v)
        t = flip(octahedron, u, v)
        assert flip(t, c, d) == octahedron


def test_flip_changes_one_edge():
    rng = random.Random(3)
    t = random_walk(build_g2(20), 100, rng)
    for u, v in sorted(edges(t))[:30]:
        if is_flippable(t, u, v):
            assert len(edges(t) ^ edges(flip(t, u, v))) == 2


def test_apply_sequence(octahedron):
    assert apply_sequence(octahedron, []) == octahedron
    c, d = flip_partner(octahedron, 0, 1)
    assert apply_sequence(octahedron, [(0, 1), (c, d)]) == octahedron
    once = apply_sequence(octahedron, [(0, 1)])
    assert canonical_code(once) == canonical_code(flip(octahedron, 2, 3))


def test_apply_sequence_reports_index(octahedron):
    with pytest.raises(SequenceError) as info:
        apply_sequence(octahedron, [(0, 1), (0, 1)])
    assert info.value.index == 1


# -- canonical codes ---------------------------------------------------------

def test_code_relabel_invariance(octahedron):
    rng = random.Random(0)
    base = canonical_code(octahedron)
    for _ in range(20):
        perm = list(range(6))
        rng.shuffle(perm)
        assert canonical_code(relabel(octahedron, perm)) == base


def test_code_mirror(stacked6):
    t = random_walk(build_g1(20).base, 50, random.Random(9))
    assert canonical_code(mirror(t), True) == canonical_code(t, True)
    assert canonical_code(mirror(stacked6), True) == canonical_code(stacked6, True)


def test_code_round_trip():
    t = build_g1(17).base
    code = canonical_code(t)
    back = from_code(code)
    assert canonical_code(back) == code
    assert CanonicalCode.from_string(str(code)) == code


def test_chiral_triangulation_detected():
    # some triangulation at n=9 must be chiral; orientation-only codes then differ
    rng = random.Random(1)
    found = False
    for _ in range(50):
        t = random_walk(build_g2(9), 30, rng)
        if canonical_code(t, False) != canonical_code(mirror(t), False):
            found = True
            assert canonical_code(t, True) == canonical_code(mirror(t), True)
            break
    assert found


def test_code_independent_of_start_edge(octahedron):
    # every relabelling that sends some dart to (0, 1) gives the same code
    t = build_g2(7)
    base = canonical_code(t)
    for u in range(t.n):
        for v in t.rotation[u]:
            perm = [0] * t.n
            rest = iter(x for x in range(2, t.n))
            for w in range(t.n):
                perm[w] = 0 if w == u else 1 if w == v else next(rest)
            assert canonical_code(relabel(t, perm)) == base


@pytest.mark.parametrize("n", [6, 7])
@pytest.mark.parametrize("mirror_mode", [True, False])
def test_code_matches_bruteforce_isomorphism(n, mirror_mode):
    rng = random.Random(n)
    tris = [random_walk(build_g2(n), 20, rng) for _ in range(6)]
    for a in tris:
        for b in tris:
            same_code = canonical_code(a, mirror_mode) == canonical_code(b, mirror_mode)
            assert same_code == isomorphic_embeddings(a, b, mirror_mode)


@settings(max_examples=40, deadline=None)
@given(st.integers(8, 25), st.integers(0, 2**32 - 1))
def test_random_flips_keep_invariants(n, seed):
    rng = random.Random(seed)
    t = random_walk(build_g2(n), 3 * n, rng)
    t.validate()
    assert len(edges(t)) == 3 * n - 6
    assert len(faces(t)) == 2 * n - 4
    perm = list(range(n))
    rng.shuffle(perm)
    assert canonical_code(relabel(t, perm)) == canonical_code(t)


def test_immutable(k4):
    with pytest.raises(AttributeError):
        k4.rotation = ()


def test_pickle(octahedron):
    import pickle

    assert pickle.loads(pickle.dumps(octahedron)) == octahedron
