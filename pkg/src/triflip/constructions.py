"""Generators for the extremal pair G1/G2 and the bounded-degree hosts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .kernel import Triangulation, faces, from_faces

__all__ = [
    "HostSpec",
    "ColoredTriangulation",
    "Lemma2Report",
    "Lemma2Violation",
    "host_spec",
    "host_max_deg6",
    "build_g1",
    "build_g2",
    "g2_apexes",
    "check_lemma2_structure",
    "lemma2_bound",
]

CAP_NAMES = ("diagonals", "apex", "edge", "triangle")


@dataclass(frozen=True)
class HostSpec:
    """How ``host_max_deg6(m)`` is built: a catalog entry or a capped barrel."""

    m: int
    rings: int = 0
    top_cap: int = 0
    bottom_cap: int = 0
    catalog: str | None = None


def host_spec(m: int) -> HostSpec:
    if m < 4:
        raise ValueError(f"host needs at least 4 vertices, got {m}")
    if m < 12:
        return HostSpec(m, catalog=_CATALOG_NAMES[m])
    r = m // 6
    rest = m - 6 * r
    top = min(3, rest)
    return HostSpec(m, rings=r, top_cap=top, bottom_cap=rest - top)


_CATALOG_NAMES = {
    4: "tetrahedron",
    5: "triangular bipyramid",
    6: "octahedron",
    7: "pentagonal bipyramid",
    8: "triangulated square antiprism",
    9: "triaugmented triangular prism",
    10: "gyroelongated square bipyramid",
    11: "gyroelongated square bipyramid plus one stacked vertex",
}


def _band(top, bottom):
    # antiprism band between two rings of equal length
    k = len(top)
    out = []
    for j in range(k):
        out.append((top[j], top[(j + 1) % k], bottom[j]))
        out.append((top[(j + 1) % k], bottom[(j + 1) % k], bottom[j]))
    return out


def _fan(ring, apex):
    k = len(ring)
    return [(ring[j], ring[(j + 1) % k], apex) for j in range(k)]


def _bipyramid(k):
    ring = list(range(k))
    return _fan(ring, k) + _fan(ring, k + 1)


def _hex_cap(h, kind, nxt):
    """Triangles closing the hexagon ``h``; new vertices start at ``nxt``."""
    if kind == 0:
        return [(h[0], h[1], h[2]), (h[2], h[3], h[4]), (h[4], h[5], h[0]), (h[0], h[2], h[4])]
    if kind == 1:
        return _fan(h, nxt)
    if kind == 2:
        x, y = nxt, nxt + 1
        return [
            (x, h[0], h[1]), (x, h[1], h[2]), (x, h[2], h[3]), (x, h[3], y),
            (y, h[3], h[4]), (y, h[4], h[5]), (y, h[5], h[0]), (y, h[0], x),
        ]
    x, y, z = nxt, nxt + 1, nxt + 2
    return [
        (x, h[0], h[1]), (x, h[1], h[2]), (x, h[2], y), (y, h[2], h[3]), (y, h[3], h[4]),
        (y, h[4], z), (z, h[4], h[5]), (z, h[5], h[0]), (z, h[0], x), (x, y, z),
    ]


def _catalog_faces(m):
    if m in (5, 6, 7):
        return _bipyramid(m - 2)
    if m == 4:
        return [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    if m == 8:
        top, bot = [0, 1, 2, 3], [4, 5, 6, 7]
        return _band(top, bot) + [(0, 1, 2), (0, 2, 3), (4, 5, 6), (4, 6, 7)]
    if m == 9:
        out = [(0, 1, 2), (3, 4, 5)]
        for i in range(3):
            j = (i + 1) % 3
            p = 6 + i
            out += [(i, j, p), (j, j + 3, p), (j + 3, i + 3, p), (i + 3, i, p)]
        return out
    top, bot = [0, 1, 2, 3], [4, 5, 6, 7]
    out = _band(top, bot) + _fan(top, 8) + _fan(bot, 9)
    if m == 11:
        # stack into (0, 1, 8): corners have degrees 5, 5, 4 before insertion
        out.remove((0, 1, 8))
        out += [(0, 1, 10), (1, 8, 10), (8, 0, 10)]
    return out


@lru_cache(maxsize=None)
def host_max_deg6(m: int) -> Triangulation:
    """A triangulation on ``m`` vertices with maximum degree at most six.

    Small sizes come from a fixed catalog.  From 12 vertices on, the host is a
    barrel of ``r`` stacked hexagonal antiprism rings whose two end hexagons
    are closed by caps adding 0, 1, 2 or 3 interior vertices.
    """
    spec = host_spec(m)
    if spec.catalog is not None:
        return from_faces(m, _catalog_faces(m))
    rings = [list(range(6 * i, 6 * i + 6)) for i in range(spec.rings)]
    tris = []
    for a, b in zip(rings, rings[1:]):
        tris += _band(a, b)
    nxt = 6 * spec.rings
    # the top hexagon is traversed the other way round by its band
    tris += [f[::-1] for f in _hex_cap(rings[0], spec.top_cap, nxt)]
    nxt += spec.top_cap
    tris += _hex_cap(rings[-1], spec.bottom_cap, nxt)
    return from_faces(m, tris)


@dataclass(frozen=True)
class ColoredTriangulation:
    """A triangulation whose vertices ``0..m-1`` are blue and the rest red."""

    base: Triangulation
    num_blue: int
    skipped_faces: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def n(self) -> int:
        return self.base.n

    def is_blue(self, v: int) -> bool:
        return v < self.num_blue

    @property
    def colors(self) -> list[str]:
        return ["blue" if v < self.num_blue else "red" for v in range(self.n)]

    def comments(self) -> list[str]:
        return [f"blue 0..{self.num_blue - 1}"]


@lru_cache(maxsize=None)
def _sorted_faces(m):
    return sorted(faces(host_max_deg6(m)), key=lambda f: tuple(sorted(f)))


def _rot3(a, b, c):
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


def build_g1(n: int) -> ColoredTriangulation:
    """Host on ``n // 3 + 2`` blue vertices with red degree-3 vertices stacked
    into all faces, all but one, or all but two (``n % 3`` = 2, 1, 0).

    The skipped faces are those with the lexicographically smallest sorted
    vertex triples.
    """
    if n < 6:
        raise ValueError(f"G1 needs n >= 6, got {n}")
    m = n // 3 + 2
    host = host_max_deg6(m)
    tris = _sorted_faces(m)
    skip = {2: 0, 1: 1, 0: 2}[n % 3]
    skipped, used = tris[:skip], tris[skip:]
    assert m + len(used) == n

    succ = [dict(zip(r, r[1:] + r[:1])) for r in host.rotation]
    red_rot = []
    x = m
    for a, b, c in used:
        # traced (a, b, c): x goes after a around b, after b around c, after c around a
        for v, p in ((b, a), (c, b), (a, c)):
            s = succ[v]
            s[p], s[x] = x, s[p]
        red_rot.append(_rot3(a, c, b))
        x += 1
    rotation = []
    for s in succ:
        start = min(s)
        cyc = [start]
        w = s[start]
        while w != start:
            cyc.append(w)
            w = s[w]
        rotation.append(tuple(cyc))
    rotation += red_rot
    return ColoredTriangulation(Triangulation(rotation), m, tuple(skipped))


def g2_apexes(n: int) -> tuple[int, int]:
    """Ids of the two apexes of ``build_g2(n)``; the path is ``0..n-3``."""
    return n - 2, n - 1


def build_g2(n: int) -> Triangulation:
    """Path ``0..n-3`` with both apexes ``a = n-2`` and ``b = n-1`` joined to
    every path vertex and to each other."""
    if n < 4:
        raise ValueError(f"G2 needs n >= 4, got {n}")
    k = n - 2
    a, b = g2_apexes(n)
    rotation: list[list[int]] = []
    for i in range(k):
        # a on one side of the path, b on the other
        r = [a]
        if i > 0:
            r.append(i - 1)
        r.append(b)
        if i < k - 1:
            r.append(i + 1)
        rotation.append(r)
    rotation.append(list(range(k)) + [b])
    rotation.append([a] + list(range(k - 1, -1, -1)))
    return Triangulation(rotation)


class Lemma2Violation(AssertionError):
    pass


@dataclass(frozen=True)
class Lemma2Report:
    n: int
    max_degree: int
    max_blue_neighbors: int
    max_red_neighbors: int
    num_blue: int
    red_independent: bool
    apex_share: int
    path_share: int
    bound: int

    @property
    def ok(self) -> bool:
        return (
            self.max_degree <= 12
            and self.max_blue_neighbors <= 6
            and self.max_red_neighbors <= 6
            and self.red_independent
            and self.num_blue == self.n // 3 + 2
        )


def lemma2_bound(n: int) -> int:
    """Upper bound on common edges between G1(n) and G2(n): ``2*(n//3) + 28``."""
    return 2 * (n // 3) + 28


def check_lemma2_structure(g1: ColoredTriangulation) -> Lemma2Report:
    """Check the degree and colour facts behind the common-edge bound.

    Raises :class:`Lemma2Violation` naming the first offending vertex or edge.
    """
    t = g1.base
    n = t.n
    tails, heads, _ = t._darts
    blue = np.arange(n) < g1.num_blue
    deg = t.degrees
    nblue = np.bincount(tails, weights=blue[heads], minlength=n).astype(np.int64)
    nred = deg - nblue

    bad = np.flatnonzero(deg > 12)
    if bad.size:
        raise Lemma2Violation(f"vertex {bad[0]} has degree {deg[bad[0]]} > 12")
    bad = np.flatnonzero(nblue > 6)
    if bad.size:
        raise Lemma2Violation(f"vertex {bad[0]} has {nblue[bad[0]]} blue neighbours > 6")
    bad = np.flatnonzero(nred > 6)
    if bad.size:
        raise Lemma2Violation(f"vertex {bad[0]} has {nred[bad[0]]} red neighbours > 6")
    rr = np.flatnonzero(~blue[tails] & ~blue[heads])
    if rr.size:
        raise Lemma2Violation(f"red vertices {tails[rr[0]]} and {heads[rr[0]]} are adjacent")
    if g1.num_blue != n // 3 + 2:
        raise Lemma2Violation(f"{g1.num_blue} blue vertices, expected {n // 3 + 2}")

    apex_share = 12
    path_share = 2 * (n // 3) + 4
    bound = 2 * apex_share + path_share
    assert bound == lemma2_bound(n)
    return Lemma2Report(
        n=n,
        max_degree=int(deg.max()),
        max_blue_neighbors=int(nblue.max()),
        max_red_neighbors=int(nred.max()),
        num_blue=g1.num_blue,
        red_independent=True,
        apex_share=apex_share,
        path_share=path_share,
        bound=bound,
    )
