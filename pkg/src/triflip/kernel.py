"""Combinatorial triangulations stored as rotation systems.

A triangulation on ``n`` vertices is a tuple of rotations; ``rotation[v]`` is
the clockwise cyclic order of the neighbours of ``v``.  Faces are traced with
the rule "from the directed edge (u, v) continue with (v, w), where ``w``
immediately follows ``u`` in the rotation of ``v``", so every directed edge
lies on exactly one face.

Triangulations are immutable.  :func:`flip` and friends return new objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import chain
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Triangulation",
    "CanonicalCode",
    "TriangulationError",
    "ParseError",
    "ValidationError",
    "FlipError",
    "NotAnEdgeError",
    "InvalidFlipError",
    "SequenceError",
    "parse",
    "format_rotation",
    "faces",
    "flip",
    "flip_partner",
    "is_flippable",
    "apply_sequence",
    "canonical_code",
    "from_code",
    "from_faces",
    "mirror",
    "relabel",
    "degree",
    "edges",
    "max_degree",
]


class TriangulationError(Exception):
    """Base class for errors raised by the kernel."""


class ParseError(TriangulationError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(TriangulationError):
    """A rotation system violates a triangulation invariant.

    ``kind`` is one of ``too-small``, ``bad-vertex``, ``self-loop``,
    ``duplicate-neighbor``, ``asymmetric``, ``edge-count``,
    ``non-triangular-face``, ``disconnected``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class FlipError(TriangulationError):
    """Raised when a flip cannot be performed.

    The untouched input triangulation is available as ``triangulation``.
    """

    def __init__(self, message: str, triangulation: "Triangulation", edge: tuple[int, int]):
        super().__init__(message)
        self.triangulation = triangulation
        self.edge = edge


class NotAnEdgeError(FlipError):
    pass


class InvalidFlipError(FlipError):
    pass


class SequenceError(TriangulationError):
    def __init__(self, index: int, cause: FlipError):
        super().__init__(f"flip #{index} {cause.edge}: {cause}")
        self.index = index
        self.cause = cause


def _normalized(r: Sequence[int]) -> tuple[int, ...]:
    # cyclic orders are compared starting from their smallest entry
    if not r:
        return ()
    lo = min(r)
    if r[0] == lo:
        return tuple(r)
    i = r.index(lo)
    return tuple(r[i:]) + tuple(r[:i])


class Triangulation:
    """An embedded simple maximal planar graph.

    Parameters
    ----------
    rotation:
        For each vertex ``0..n-1`` the neighbours in clockwise order.
    validate:
        Check every invariant (symmetry, simplicity, ``3n - 6`` edges,
        ``2n - 4`` triangular faces, connectivity).  Internal callers that
        produce triangulations from valid ones by construction pass ``False``.
    """

    __slots__ = ("rotation", "__dict__")

    def __init__(self, rotation: Iterable[Sequence[int]], *, validate: bool = True):
        rot = tuple(_normalized(r if isinstance(r, tuple) else tuple(r)) for r in rotation)
        object.__setattr__(self, "rotation", rot)
        if validate:
            self.validate()

    def __setattr__(self, name, value):
        if name == "rotation":
            raise AttributeError("Triangulation is immutable")
        object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return len(self.rotation)

    @property
    def num_edges(self) -> int:
        return 3 * self.n - 6

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.rotation == other.rotation

    def __hash__(self):
        return hash(self.rotation)

    def __repr__(self):
        return f"Triangulation(n={self.n})"

    def __reduce__(self):
        return (_restore, (self.rotation,))

    @cached_property
    def pos(self) -> tuple[dict[int, int], ...]:
        """``pos[v][w]`` is the index of ``w`` in ``rotation[v]``."""
        return tuple({w: i for i, w in enumerate(r)} for r in self.rotation)

    def succ(self, v: int, u: int) -> int:
        """The neighbour following ``u`` in the rotation of ``v``."""
        r = self.rotation[v]
        return r[(self.pos[v][u] + 1) % len(r)]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.pos[u]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.fromiter(map(len, self.rotation), dtype=np.int64, count=self.n)

    @cached_property
    def _darts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # (tails, heads, offsets) of the directed edges in rotation order
        deg = self.degrees
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=offsets[1:])
        heads = np.fromiter(chain.from_iterable(self.rotation), dtype=np.int64, count=int(offsets[-1]))
        tails = np.repeat(np.arange(self.n, dtype=np.int64), deg)
        return tails, heads, offsets

    def validate(self) -> None:
        """Raise :class:`ValidationError` unless all invariants hold."""
        n = self.n
        if n < 4:
            raise ValidationError("too-small", f"need at least 4 vertices, got {n}")
        tails, heads, offsets = self._darts
        deg = self.degrees
        bad = np.flatnonzero((heads < 0) | (heads >= n))
        if bad.size:
            v = int(tails[bad[0]])
            raise ValidationError("bad-vertex", f"vertex {v} lists unknown vertex {int(heads[bad[0]])}")
        loops = np.flatnonzero(tails == heads)
        if loops.size:
            v = int(tails[loops[0]])
            raise ValidationError("self-loop", f"vertex {v} lists itself")
        keys = tails * n + heads
        order = np.argsort(keys, kind="stable")
        skeys = keys[order]
        dup = np.flatnonzero(skeys[1:] == skeys[:-1])
        if dup.size:
            k = int(skeys[dup[0]])
            raise ValidationError("duplicate-neighbor", f"vertex {k // n} lists {k % n} twice")
        rkeys = heads * n + tails
        idx = np.searchsorted(skeys, rkeys)
        idx[idx == len(skeys)] = 0
        missing = np.flatnonzero(skeys[idx] != rkeys)
        if missing.size:
            i = missing[0]
            raise ValidationError(
                "asymmetric", f"{int(heads[i])} in rotation of {int(tails[i])} but not vice versa"
            )
        if len(keys) != 2 * (3 * n - 6):
            raise ValidationError("edge-count", f"expected {3 * n - 6} edges, got {len(keys) // 2}")
        rev = order[idx]
        pos_in_rot = np.arange(len(heads)) - offsets[tails]
        nxt = offsets[tails] + (pos_in_rot + 1) % deg[tails]
        phi = nxt[rev]
        third = phi[phi[phi]]
        broken = np.flatnonzero(third != np.arange(len(heads)))
        if broken.size:
            i = broken[0]
            raise ValidationError(
                "non-triangular-face",
                f"face through directed edge ({int(tails[i])}, {int(heads[i])}) is not a triangle",
            )
        graph = coo_matrix((np.ones(len(tails), dtype=np.int8), (tails, heads)), shape=(n, n))
        ncomp, _ = connected_components(graph, directed=False)
        if ncomp != 1:
            raise ValidationError("disconnected", f"{ncomp} connected components")
        self.__dict__["_phi"] = phi

    @cached_property
    def _phi(self) -> np.ndarray:
        # face successor permutation on directed-edge indices
        tails, heads, offsets = self._darts
        deg = self.degrees
        keys = tails * self.n + heads
        order = np.argsort(keys)
        rev = order[np.searchsorted(keys[order], heads * self.n + tails)]
        pos_in_rot = np.arange(len(heads)) - offsets[tails]
        nxt = offsets[tails] + (pos_in_rot + 1) % deg[tails]
        return nxt[rev]

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, w) for u, r in enumerate(self.rotation) for w in r if u < w)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as integer bitmasks."""
        out = []
        for r in self.rotation:
            m = 0
            for w in r:
                m |= 1 << w
            out.append(m)
        return tuple(out)


def _restore(rotation):
    t = Triangulation.__new__(Triangulation)
    object.__setattr__(t, "rotation", rotation)
    return t


def _trusted(rotation: Iterable[Sequence[int]]) -> Triangulation:
    return Triangulation(rotation, validate=False)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse(text: str) -> Triangulation:
    """Read the ASCII rotation format.

    ``#`` comment lines are skipped, then a header ``n <N>`` and exactly ``N``
    lines ``<v> : <w1> <w2> ...`` in vertex order.
    """
    rotation, _ = _parse(text)
    return Triangulation(rotation)


def _parse(text: str) -> tuple[list[list[int]], list[str]]:
    comments = []
    n = None
    rotation: list[list[int]] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        if n is None:
            parts = line.split(" ")
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError("expected header 'n <N>'", lineno)
            if not parts[1].isdigit():
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno, 3)
            n = int(parts[1])
            continue
        if len(rotation) == n:
            raise ParseError("more vertex lines than announced", lineno)
        head, sep, rest = line.partition(" : ")
        if not sep:
            raise ParseError("expected '<v> : <neighbours>'", lineno)
        if not head.isdigit():
            raise ParseError(f"bad vertex id {head!r}", lineno)
        if int(head) != len(rotation):
            raise ParseError(f"expected vertex {len(rotation)}, got {head}", lineno)
        nbrs = []
        col = len(head) + 4
        for tok in rest.split(" "):
            if not tok.isdigit():
                raise ParseError(f"bad neighbour {tok!r}", lineno, col)
            nbrs.append(int(tok))
            col += len(tok) + 1
        rotation.append(nbrs)
    if n is None:
        raise ParseError("missing header 'n <N>'", len(lines) + 1)
    if len(rotation) != n:
        raise ParseError(f"expected {n} vertex lines, got {len(rotation)}", len(lines) + 1)
    return rotation, comments


def format_rotation(t: Triangulation, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"n {t.n}")
    out.extend(f"{v} : " + " ".join(map(str, r)) for v, r in enumerate(t.rotation))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# accessors
# ---------------------------------------------------------------------------

def degree(t: Triangulation, v: int) -> int:
    if not 0 <= v < t.n:
        raise KeyError(f"unknown vertex {v}")
    return len(t.rotation[v])


def edges(t: Triangulation) -> frozenset[tuple[int, int]]:
    """Undirected edges as ``(u, v)`` pairs with ``u < v``."""
    return t.edge_set


def max_degree(t: Triangulation) -> int:
    return int(t.degrees.max())


def faces(t: Triangulation) -> list[tuple[int, int, int]]:
    """The ``2n - 4`` oriented triangles, each traced from its smallest dart."""
    phi = t._phi
    tails, heads, _ = t._darts
    ids = np.arange(len(phi))
    if np.any(phi[phi[phi]] != ids):
        raise ValidationError("non-triangular-face", "corrupt embedding")
    first = np.flatnonzero((ids < phi) & (ids < phi[phi]))
    return list(zip(tails[first].tolist(), heads[first].tolist(), heads[phi[first]].tolist()))


# ---------------------------------------------------------------------------
# flips
# ---------------------------------------------------------------------------

def flip_partner(t: Triangulation, a: int, b: int) -> tuple[int, int]:
    """The apexes ``(c, d)`` of the faces ``(a, b, c)`` and ``(b, a, d)``."""
    if not t.has_edge(a, b):
        raise NotAnEdgeError(f"{{{a}, {b}}} is not an edge", t, (a, b))
    return t.succ(b, a), t.succ(a, b)


def is_flippable(t: Triangulation, a: int, b: int) -> bool:
    if not t.has_edge(a, b):
        return False
    c, d = t.succ(b, a), t.succ(a, b)
    return c != d and d not in t.pos[c]


def flip(t: Triangulation, a: int, b: int) -> Triangulation:
    """Replace edge ``{a, b}`` by the opposite diagonal ``{c, d}``.

    Raises :class:`InvalidFlipError` if the result would not be simple.
    """
    c, d = flip_partner(t, a, b)
    if c == d or d in t.pos[c]:
        raise InvalidFlipError(f"flipping {{{a}, {b}}} would duplicate edge {{{c}, {d}}}", t, (a, b))
    rot = list(t.rotation)
    rot[a] = tuple(w for w in rot[a] if w != b)
    rot[b] = tuple(w for w in rot[b] if w != a)
    rc = rot[c]
    i = t.pos[c][b] + 1
    rot[c] = rc[:i] + (d,) + rc[i:]
    rd = rot[d]
    j = t.pos[d][a] + 1
    rot[d] = rd[:j] + (c,) + rd[j:]
    return _trusted(rot)


def apply_sequence(t: Triangulation, sequence: Iterable[tuple[int, int]]) -> Triangulation:
    for i, (u, v) in enumerate(sequence):
        try:
            t = flip(t, u, v)
        except FlipError as exc:
            raise SequenceError(i, exc) from exc
    return t


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalCode:
    """Isomorphism-class key; equal codes (same mode) mean isomorphic embeddings."""

    code: tuple[int, ...]
    mirror_mode: bool = True

    def __str__(self):
        return " ".join(map(str, self.code))

    @classmethod
    def from_string(cls, text: str, mirror_mode: bool = True) -> "CanonicalCode":
        return cls(tuple(int(x) for x in text.split()), mirror_mode)


def _candidate(rotation, pos, u, v, best):
    """BFS code from directed edge (u, v), or None once it exceeds ``best``."""
    n = len(rotation)
    label = [0] * n
    parent = [0] * n
    label[u], label[v] = 1, 2
    parent[u], parent[v] = v, u
    order = [u, v]
    fresh = 3
    code = []
    k = 0
    tied = best is not None
    for x in order:
        r = rotation[x]
        d = len(r)
        s = pos[x][parent[x]]
        for j in range(d):
            y = r[(s + j) % d]
            ly = label[y]
            if not ly:
                ly = label[y] = fresh
                fresh += 1
                parent[y] = x
                order.append(y)
            if tied:
                b = best[k]
                if ly > b:
                    return None
                if ly < b:
                    tied = False
            code.append(ly)
            k += 1
        if tied:
            if best[k] != 0:
                # best is longer here, so 0 < best[k]
                tied = False
        code.append(0)
        k += 1
    return code


def canonical_code(t: Triangulation, mirror_mode: bool = True) -> CanonicalCode:
    """Lexicographically smallest BFS code over all starting darts.

    Labels start at 1 and each vertex's neighbour list is closed by a 0.
    With ``mirror_mode`` the reversed rotation system is also tried, so a
    triangulation and its mirror image share one code.
    """
    systems = [(t.rotation, t.pos)]
    if mirror_mode:
        m = mirror(t)
        systems.append((m.rotation, m.pos))
    dmin = min(len(r) for r in t.rotation)
    best = None
    for rotation, pos in systems:
        for u, r in enumerate(rotation):
            # the first block is 2..deg(u)+1, 0, so only min-degree roots can win
            if len(r) != dmin:
                continue
            for v in r:
                cand = _candidate(rotation, pos, u, v, best)
                if cand is not None:
                    best = cand
    return CanonicalCode(tuple(best), mirror_mode)


def from_code(code: CanonicalCode | Sequence[int]) -> Triangulation:
    """Rebuild a triangulation (labelled by BFS order) from a code."""
    seq = code.code if isinstance(code, CanonicalCode) else tuple(code)
    rotation = []
    cur: list[int] = []
    for x in seq:
        if x == 0:
            rotation.append(cur)
            cur = []
        else:
            cur.append(x - 1)
    if cur:
        raise ValueError("code does not end with a separator")
    return Triangulation(rotation)


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------

def mirror(t: Triangulation) -> Triangulation:
    """All rotations reversed."""
    return _trusted(r[::-1] for r in t.rotation)


def relabel(t: Triangulation, perm: Sequence[int]) -> Triangulation:
    """Vertex ``v`` becomes ``perm[v]``."""
    rot: list = [None] * t.n
    for v, r in enumerate(t.rotation):
        rot[perm[v]] = tuple(perm[w] for w in r)
    return _trusted(rot)


def from_faces(n: int, triangles: Iterable[Sequence[int]], *, validate: bool = True) -> Triangulation:
    """Build a triangulation from its faces, orienting them consistently.

    The triangles may be given in any orientation; the first one fixes the
    orientation of the whole sphere.
    """
    tris = [tuple(f) for f in triangles]
    darts = {d for a, b, c in tris for d in ((a, b), (b, c), (c, a))}
    if len(darts) == 3 * len(tris) and all((b, a) in darts for a, b in darts):
        oriented = tris
    else:
        oriented = _orient(tris)
    nxt: list[dict[int, int]] = [{} for _ in range(n)]
    for a, b, c in oriented:
        # traced face (a, b, c): succ_b(a) = c, succ_c(b) = a, succ_a(c) = b
        nxt[b][a] = c
        nxt[c][b] = a
        nxt[a][c] = b
    rotation = []
    for v in range(n):
        s = nxt[v]
        if not s:
            rotation.append(())
            continue
        start = min(s)
        cyc = [start]
        w = s[start]
        while w != start and len(cyc) <= len(s):
            cyc.append(w)
            w = s[w]
        if len(cyc) != len(s):
            raise ValidationError("non-triangular-face", f"faces around vertex {v} do not form a disk")
        rotation.append(tuple(cyc))
    return Triangulation(rotation, validate=validate)


def _orient(tris):
    by_edge: dict[frozenset, list[int]] = {}
    for i, (a, b, c) in enumerate(tris):
        for e in ((a, b), (b, c), (c, a)):
            by_edge.setdefault(frozenset(e), []).append(i)
    oriented: list = [None] * len(tris)
    for root in range(len(tris)):
        if oriented[root] is not None:
            continue
        oriented[root] = tris[root]
        stack = [root]
        while stack:
            i = stack.pop()
            a, b, c = oriented[i]
            for x, y in ((a, b), (b, c), (c, a)):
                for j in by_edge[frozenset((x, y))]:
                    if j == i:
                        continue
                    p, q, r = tris[j]
                    # the neighbour must traverse the shared edge as (y, x)
                    f = (p, q, r) if (x, y) not in ((p, q), (q, r), (r, p)) else (p, r, q)
                    if oriented[j] is None:
                        oriented[j] = f
                        stack.append(j)
                    elif oriented[j] != f and oriented[j] not in ((f[1], f[2], f[0]), (f[2], f[0], f[1])):
                        raise ValidationError("non-triangular-face", "faces cannot be oriented consistently")
    return oriented
