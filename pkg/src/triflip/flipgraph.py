"""Small-n flip graphs: enumeration, distances, diameter and catalog files.

Catalog file layout (version 1, all integers little-endian)::

    offset  size  field
    0       8     magic b"TRIFLIPC"
    8       2     version (1)
    10      2     n
    12      1     mirror mode (0 or 1)
    13      1     flags (bit 0: complete component)
    14      4     node count N
    18      4     edge count (undirected, no loops)
    22      4     code length L (= 7n - 12)
    26      4     seed node id
    30      N*L   codes, one byte per token, sorted lexicographically
    ...           adjacency: per node a varint degree followed by varint gaps
                  (id - previous id - 1, previous starting at -1)
    end-4   4     CRC-32 of every preceding byte

Node ids are positions in the sorted code table, so two catalogs with the same
node set serialize to the same bytes.
"""

from __future__ import annotations

import struct
import zlib
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .constructions import build_g2
from .kernel import CanonicalCode, Triangulation, canonical_code, flip, from_code, is_flippable

__all__ = [
    "FlipGraphCatalog",
    "CatalogError",
    "ResourceLimitError",
    "DisconnectedCatalogError",
    "enumerate_flip_graph",
    "flip_neighbors",
    "distance",
    "distances_from",
    "diameter",
    "save",
    "load",
    "dumps",
    "loads",
]

MAGIC = b"TRIFLIPC"
VERSION = 1
_HEADER = struct.Struct("<8sHHBBIIII")


class CatalogError(Exception):
    """Corrupt, truncated or incompatible catalog."""


class ResourceLimitError(RuntimeError):
    def __init__(self, message: str, partial: "FlipGraphCatalog"):
        super().__init__(message)
        self.partial = partial


class DisconnectedCatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class FlipGraphCatalog:
    n: int
    mirror_mode: bool
    codes: tuple[tuple[int, ...], ...]
    adjacency: tuple[tuple[int, ...], ...]
    seed: int = 0
    complete: bool = True
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {c: i for i, c in enumerate(self.codes)})

    @property
    def num_nodes(self) -> int:
        return len(self.codes)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def node_of(self, t: Triangulation) -> int:
        if t.n != self.n:
            raise KeyError(f"triangulation has {t.n} vertices, catalog is for n={self.n}")
        code = canonical_code(t, self.mirror_mode).code
        try:
            return self.index[code]
        except KeyError:
            raise KeyError("triangulation not in catalog") from None

    def triangulation(self, i: int) -> Triangulation:
        return from_code(self.codes[i])

    def code(self, i: int) -> CanonicalCode:
        return CanonicalCode(self.codes[i], self.mirror_mode)


def flip_neighbors(t: Triangulation, mirror_mode: bool = True) -> set[tuple[int, ...]]:
    """Codes of all triangulations one valid flip away from ``t``."""
    out = set()
    for u, r in enumerate(t.rotation):
        for v in r:
            if u < v and is_flippable(t, u, v):
                out.add(canonical_code(flip(t, u, v), mirror_mode).code)
    return out


def _expand(args):
    code, mirror_mode = args
    return sorted(flip_neighbors(from_code(code), mirror_mode))


def enumerate_flip_graph(
    n: int,
    mirror_mode: bool = True,
    *,
    workers: int = 1,
    max_nodes: int | None = None,
) -> FlipGraphCatalog:
    """Breadth-first search of the flip graph from ``build_g2(n)``.

    The result is the component reachable from the seed, with nodes re-sorted
    by code so the output does not depend on traversal order or ``workers``.
    Flips leading back to the same isomorphism class are not recorded.
    Exceeding ``max_nodes`` raises :class:`ResourceLimitError` carrying the
    partial catalog.
    """
    seed = canonical_code(build_g2(n), mirror_mode).code
    ids = {seed: 0}
    codes = [seed]
    adj: list[set[int]] = [set()]
    frontier = [seed]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            jobs = [(c, mirror_mode) for c in frontier]
            if pool is None:
                results = map(_expand, jobs)
            else:
                results = pool.map(_expand, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            nxt = []
            # merged in frontier order, so ids are independent of the worker count
            for code, nbrs in zip(frontier, results):
                i = ids[code]
                for c in nbrs:
                    j = ids.get(c)
                    if j is None:
                        j = ids[c] = len(codes)
                        codes.append(c)
                        adj.append(set())
                        nxt.append(c)
                    if j != i:
                        adj[i].add(j)
                        adj[j].add(i)
            frontier = nxt
            if max_nodes is not None and len(codes) > max_nodes:
                partial = _sorted_catalog(n, mirror_mode, codes, adj, seed, complete=False)
                raise ResourceLimitError(
                    f"node limit {max_nodes} exceeded ({len(codes)} nodes found so far)", partial
                )
    finally:
        if pool is not None:
            pool.shutdown()
    return _sorted_catalog(n, mirror_mode, codes, adj, seed, complete=True)


def _sorted_catalog(n, mirror_mode, codes, adj, seed, complete):
    order = sorted(range(len(codes)), key=codes.__getitem__)
    new_id = {old: new for new, old in enumerate(order)}
    return FlipGraphCatalog(
        n=n,
        mirror_mode=mirror_mode,
        codes=tuple(codes[o] for o in order),
        adjacency=tuple(tuple(sorted(new_id[j] for j in adj[o])) for o in order),
        seed=new_id[codes.index(seed)],
        complete=complete,
    )


def distances_from(catalog: FlipGraphCatalog, source: int) -> list[int]:
    """BFS distances from node ``source``; unreachable nodes get -1."""
    dist = [-1] * catalog.num_nodes
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in catalog.adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance(catalog: FlipGraphCatalog, t1: Triangulation, t2: Triangulation) -> int:
    """Flip distance between two triangulations of the catalog's size."""
    a, b = catalog.node_of(t1), catalog.node_of(t2)
    d = distances_from(catalog, a)[b]
    if d < 0:
        raise DisconnectedCatalogError(f"nodes {a} and {b} are in different components")
    return d


def diameter(catalog: FlipGraphCatalog) -> tuple[int, tuple[CanonicalCode, CanonicalCode]]:
    """Exact diameter by BFS from every node, with one antipodal pair."""
    best, pair = -1, (0, 0)
    for s in range(catalog.num_nodes):
        dist = distances_from(catalog, s)
        if min(dist) < 0:
            raise DisconnectedCatalogError(
                f"node {s} reaches only {sum(d >= 0 for d in dist)} of {catalog.num_nodes} nodes"
            )
        m = max(dist)
        if m > best:
            best, pair = m, (s, dist.index(m))
    return best, (catalog.code(pair[0]), catalog.code(pair[1]))


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _varint(x: int, out: bytearray) -> None:
    while x >= 0x80:
        out.append((x & 0x7F) | 0x80)
        x >>= 7
    out.append(x)


def _read_varint(buf: bytes, pos: int, end: int) -> tuple[int, int]:
    x = shift = 0
    while True:
        if pos >= end:
            raise CatalogError("truncated catalog: adjacency section ends early")
        b = buf[pos]
        pos += 1
        x |= (b & 0x7F) << shift
        if b < 0x80:
            return x, pos
        shift += 7


def dumps(catalog: FlipGraphCatalog) -> bytes:
    code_len = 7 * catalog.n - 12
    out = bytearray(
        _HEADER.pack(
            MAGIC, VERSION, catalog.n, int(catalog.mirror_mode), int(catalog.complete),
            catalog.num_nodes, catalog.num_edges, code_len, catalog.seed,
        )
    )
    for c in catalog.codes:
        if len(c) != code_len:
            raise CatalogError(f"code of length {len(c)}, expected {code_len}")
        out += bytes(c)
    for nbrs in catalog.adjacency:
        _varint(len(nbrs), out)
        prev = -1
        for j in nbrs:
            _varint(j - prev - 1, out)
            prev = j
    out += struct.pack("<I", zlib.crc32(out))
    return bytes(out)


def loads(data: bytes, mirror_mode: bool | None = None) -> FlipGraphCatalog:
    """Parse catalog bytes; ``mirror_mode`` (if given) must match the file."""
    if len(data) < _HEADER.size + 4:
        raise CatalogError("truncated catalog: header incomplete")
    magic, version, n, mirror, flags, count, num_edges, code_len, seed = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CatalogError("not a catalog file (bad magic)")
    if version != VERSION:
        raise CatalogError(f"unsupported catalog version {version}, expected {VERSION}")
    end = len(data) - 4
    codes_end = _HEADER.size + count * code_len
    if codes_end > end:
        raise CatalogError("truncated catalog: code table incomplete")
    (crc,) = struct.unpack_from("<I", data, end)
    if zlib.crc32(data[:end]) != crc:
        raise CatalogError("checksum mismatch")
    if mirror_mode is not None and bool(mirror) != mirror_mode:
        raise CatalogError(
            f"mirror mode mismatch: file has mirror={'on' if mirror else 'off'}, "
            f"requested {'on' if mirror_mode else 'off'}"
        )
    codes = tuple(
        tuple(data[_HEADER.size + i * code_len:_HEADER.size + (i + 1) * code_len]) for i in range(count)
    )
    pos = codes_end
    adjacency = []
    for _ in range(count):
        deg, pos = _read_varint(data, pos, end)
        prev = -1
        nbrs = []
        for _ in range(deg):
            gap, pos = _read_varint(data, pos, end)
            prev += gap + 1
            nbrs.append(prev)
        adjacency.append(tuple(nbrs))
    if pos != end:
        raise CatalogError("trailing bytes after adjacency section")
    cat = FlipGraphCatalog(n, bool(mirror), codes, tuple(adjacency), seed, bool(flags & 1))
    if cat.num_edges != num_edges:
        raise CatalogError(f"header announces {num_edges} edges, adjacency has {cat.num_edges}")
    return cat


def save(catalog: FlipGraphCatalog, path) -> None:
    Path(path).write_bytes(dumps(catalog))


def load(path, mirror_mode: bool | None = None) -> FlipGraphCatalog:
    return loads(Path(path).read_bytes(), mirror_mode)
