"""Path covers and matchings, and the bijections onto G2 they induce."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .bounds import VertexBijection, common_edges
from .constructions import g2_apexes
from .kernel import Triangulation

__all__ = [
    "PathCover",
    "Matching",
    "PathCoverMapping",
    "path_cover",
    "min_path_cover",
    "max_matching",
    "exhaustive_max_matching",
    "path_cover_mapping",
    "matching_mapping",
]


@dataclass(frozen=True)
class PathCover:
    paths: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return len(self.paths)

    def check(self, t: Triangulation) -> None:
        seen = [v for path in self.paths for v in path]
        if sorted(seen) != list(range(t.n)):
            raise ValueError("paths are not a partition of the vertex set")
        for path in self.paths:
            for u, v in zip(path, path[1:]):
                if not t.has_edge(u, v):
                    raise ValueError(f"consecutive path vertices {u}, {v} are not adjacent")


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.edges)

    def check(self, t: Triangulation) -> None:
        ends = [v for e in self.edges for v in e]
        if len(ends) != len(set(ends)):
            raise ValueError("matching edges share a vertex")
        for u, v in self.edges:
            if not t.has_edge(u, v):
                raise ValueError(f"{u}, {v} is not an edge")


# ---------------------------------------------------------------------------
# path covers
# ---------------------------------------------------------------------------

def path_cover(t: Triangulation) -> PathCover:
    """Greedy cover followed by endpoint-merging passes.

    Paths grow at both ends, always stepping to the unvisited neighbour with
    the fewest unvisited neighbours of its own.
    """
    nbrs = t.rotation
    free = set(range(t.n))
    live = [len(r) for r in nbrs]

    def take(v):
        free.discard(v)
        for w in nbrs[v]:
            live[w] -= 1

    def step(v):
        opts = [w for w in nbrs[v] if w in free]
        return min(opts, key=lambda w: (live[w], w)) if opts else None

    paths = []
    while free:
        start = min(free, key=lambda v: (live[v], v))
        take(start)
        path = [start]
        for end in (True, False):
            while True:
                w = step(path[-1] if end else path[0])
                if w is None:
                    break
                take(w)
                if end:
                    path.append(w)
                else:
                    path.insert(0, w)
        paths.append(path)
    return PathCover(tuple(tuple(p) for p in _merge(t, paths)))


def _merge(t, paths):
    merged = True
    while merged and len(paths) > 1:
        merged = False
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                p, q = paths[i], paths[j]
                for a, b in ((p, q), (p, q[::-1]), (p[::-1], q), (p[::-1], q[::-1])):
                    if t.has_edge(a[-1], b[0]):
                        paths[i] = a + b
                        del paths[j]
                        merged = True
                        break
                if merged:
                    break
            if merged:
                break
    return paths


def min_path_cover(t: Triangulation) -> PathCover:
    """Minimum path cover by subset dynamic programming (n <= 14)."""
    n = t.n
    if n > 14:
        raise ValueError("exact path cover is limited to n <= 14")
    adj = t.masks
    full = (1 << n) - 1
    # ends[mask]: vertices at which a Hamiltonian path of mask can end
    ends = [0] * (1 << n)
    for v in range(n):
        ends[1 << v] = 1 << v
    for mask in range(1, 1 << n):
        e = ends[mask]
        while e:
            low = e & -e
            v = low.bit_length() - 1
            e ^= low
            ext = adj[v] & ~mask
            while ext:
                lw = ext & -ext
                ends[mask | lw] |= lw
                ext ^= lw
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        b = n + 1
        while True:
            s = sub | low
            if ends[s] and best[mask ^ s] + 1 < b:
                b = best[mask ^ s] + 1
                choice[mask] = s
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[mask] = b
    paths = []
    mask = full
    while mask:
        s = choice[mask]
        paths.append(_ham_path(s, ends, adj))
        mask ^= s
    return PathCover(tuple(paths))


def _ham_path(mask, ends, adj):
    v = (ends[mask] & -ends[mask]).bit_length() - 1
    path = [v]
    while mask != 1 << v:
        prev = mask ^ (1 << v)
        cands = ends[prev] & adj[v]
        v = (cands & -cands).bit_length() - 1
        mask = prev
        path.append(v)
    return tuple(path[::-1])


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------

def max_matching(t: Triangulation) -> Matching:
    """Maximum-cardinality matching (Edmonds' blossom algorithm via networkx)."""
    g = nx.Graph()
    g.add_nodes_from(range(t.n))
    g.add_edges_from(t.edge_set)
    m = nx.max_weight_matching(g, maxcardinality=True)
    return Matching(tuple(sorted(tuple(sorted(e)) for e in m)))


def exhaustive_max_matching(t: Triangulation) -> int:
    """Size of a maximum matching by memoised search over vertex subsets."""
    if t.n > 20:
        raise ValueError("exhaustive matching is limited to n <= 20")
    adj = t.masks
    memo = {0: 0}

    def best(mask):
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        r = best(rest)
        opts = adj[v] & rest
        while opts:
            lw = opts & -opts
            r = max(r, 1 + best(rest ^ lw))
            opts ^= lw
        memo[mask] = r
        return r

    return best((1 << t.n) - 1)


# ---------------------------------------------------------------------------
# bijections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathCoverMapping:
    gamma: VertexBijection
    p: int
    guarantee: int  # n - p - 2
    apex_vertices: tuple[int, int]


def path_cover_mapping(h: Triangulation, cover: PathCover, g2: Triangulation) -> PathCoverMapping:
    """Lay the cover's paths end to end along the path of ``g2``.

    Up to two single-vertex paths go to the apexes; otherwise an endpoint of
    the longest remaining path is used.  Every edge inside a path that lands
    on the spine is kept, and apexes see every spine vertex, so the count is
    at least ``n - p - 2``.
    """
    n = h.n
    if g2.n != n:
        raise ValueError(f"size mismatch: {n} vs {g2.n} vertices")
    cover.check(h)
    a, b = g2_apexes(n)
    if g2.degrees[a] != n - 1 or g2.degrees[b] != n - 1:
        raise ValueError("second argument is not laid out like build_g2")
    paths = [list(p) for p in cover.paths]
    apex = []
    for path in list(paths):
        if len(apex) < 2 and len(path) == 1:
            apex.append(path[0])
            paths.remove(path)
    while len(apex) < 2:
        longest = max(paths, key=len)
        apex.append(longest.pop())
        if not longest:
            paths.remove(longest)
    fwd = [0] * n
    fwd[apex[0]], fwd[apex[1]] = a, b
    spine = [v for path in paths for v in path]
    for i, v in enumerate(spine):
        fwd[v] = i
    gamma = VertexBijection(tuple(fwd), common_edges(h, g2, fwd))
    return PathCoverMapping(gamma, cover.p, n - cover.p - 2, (apex[0], apex[1]))


def matching_mapping(g1: Triangulation, g2: Triangulation) -> VertexBijection:
    """Send matched edges of ``g1`` onto matched edges of ``g2``.

    The first ``min(|M1|, |M2|)`` edges of each sorted maximum matching are
    paired endpoint to endpoint; leftover vertices are paired in id order.
    """
    if g1.n != g2.n:
        raise ValueError(f"size mismatch: {g1.n} vs {g2.n} vertices")
    m1, m2 = max_matching(g1).edges, max_matching(g2).edges
    fwd = [-1] * g1.n
    taken = set()
    for (u1, v1), (u2, v2) in zip(m1, m2):
        fwd[u1], fwd[v1] = u2, v2
        taken.update((u2, v2))
    rest = iter(x for x in range(g2.n) if x not in taken)
    for v in range(g1.n):
        if fwd[v] < 0:
            fwd[v] = next(rest)
    return VertexBijection(tuple(fwd), common_edges(g1, g2, fwd))
