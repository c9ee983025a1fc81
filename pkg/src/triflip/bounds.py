"""Common edges under vertex bijections and the flip lower bounds built on them."""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .constructions import lemma2_bound
from .kernel import Triangulation

__all__ = [
    "VertexBijection",
    "MaxCommonResult",
    "FlipLowerBound",
    "TheoremBound",
    "common_edges",
    "max_common_edges",
    "exhaustive_max_common_edges",
    "local_search",
    "lemma1_bound",
    "theorem_bound",
    "theorem_bound_violations",
]


@dataclass(frozen=True)
class VertexBijection:
    """``forward[v]`` is the image of vertex ``v``; ``c`` caches the common-edge count."""

    forward: tuple[int, ...]
    c: int | None = None

    def __post_init__(self):
        if sorted(self.forward) != list(range(len(self.forward))):
            raise ValueError("mapping is not a bijection on 0..n-1")

    def __len__(self):
        return len(self.forward)

    def format(self) -> str:
        lines = [f"c={self.c}"] if self.c is not None else []
        lines += [f"γ: {i} -> {j}" for i, j in enumerate(self.forward)]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "VertexBijection":
        c = None
        pairs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("c="):
                c = int(line[2:])
                continue
            left, _, right = line.removeprefix("γ:").partition("->")
            pairs[int(left)] = int(right)
        return cls(tuple(pairs[i] for i in range(len(pairs))), c)


def _check_sizes(g1: Triangulation, g2: Triangulation) -> None:
    if g1.n != g2.n:
        raise ValueError(f"size mismatch: {g1.n} vs {g2.n} vertices")


def common_edges(g1: Triangulation, g2: Triangulation, gamma: VertexBijection | Sequence[int]) -> int:
    """Number of edges ``{u, v}`` of ``g1`` with ``{gamma(u), gamma(v)}`` in ``g2``."""
    _check_sizes(g1, g2)
    fwd = gamma.forward if isinstance(gamma, VertexBijection) else tuple(gamma)
    if len(fwd) != g1.n or sorted(fwd) != list(range(g1.n)):
        raise ValueError("gamma is not a bijection between the vertex sets")
    pos2 = g2.pos
    return sum(1 for u, v in g1.edge_set if fwd[v] in pos2[fwd[u]])


def _with_count(g1, g2, fwd) -> VertexBijection:
    return VertexBijection(tuple(fwd), common_edges(g1, g2, fwd))


@dataclass(frozen=True)
class MaxCommonResult:
    lower: int
    upper: int
    witness: VertexBijection
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class FlipLowerBound:
    value: int
    exact: bool


# ---------------------------------------------------------------------------
# local search
# ---------------------------------------------------------------------------

def local_search(
    g1: Triangulation, g2: Triangulation, *, restarts: int = 4, seed: int = 12345
) -> VertexBijection:
    """Swap-move hill climbing from seeded random starts (first improvement)."""
    _check_sizes(g1, g2)
    n = g1.n
    rng = random.Random(seed)
    nbrs = g1.rotation
    pos2 = g2.pos
    best_fwd, best_c = None, -1
    for _ in range(restarts):
        fwd = list(range(n))
        rng.shuffle(fwd)
        c = common_edges(g1, g2, fwd)

        def local(u, v):
            # common edges incident to u or v (the edge uv counted once)
            s = sum(1 for w in nbrs[u] if fwd[w] in pos2[fwd[u]])
            s += sum(1 for w in nbrs[v] if w != u and fwd[w] in pos2[fwd[v]])
            return s

        improved = True
        while improved:
            improved = False
            for u in range(n):
                for v in range(u + 1, n):
                    before = local(u, v)
                    fwd[u], fwd[v] = fwd[v], fwd[u]
                    after = local(u, v)
                    if after > before:
                        c += after - before
                        improved = True
                    else:
                        fwd[u], fwd[v] = fwd[v], fwd[u]
        if c > best_c:
            best_fwd, best_c = list(fwd), c
    return VertexBijection(tuple(best_fwd), best_c)


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------

def _search_order(g1: Triangulation) -> list[int]:
    # highest degree first; then the vertex with most already-ordered neighbours
    n = g1.n
    deg = [len(r) for r in g1.rotation]
    first = min(range(n), key=lambda v: (-deg[v], v))
    order = [first]
    placed = {first}
    touch = [0] * n
    for w in g1.rotation[first]:
        touch[w] += 1
    while len(order) < n:
        v = min((v for v in range(n) if v not in placed), key=lambda v: (-touch[v], -deg[v], v))
        order.append(v)
        placed.add(v)
        for w in g1.rotation[v]:
            touch[w] += 1
    return order


class _Search:
    def __init__(self, g1, g2, incumbent: VertexBijection, node_limit, deadline):
        self.n = g1.n
        self.a1 = g1.masks
        self.a2 = g2.masks
        self.order = _search_order(g1)
        self.best_c = incumbent.c
        self.best_fwd = list(incumbent.forward)
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0
        self.open_upper = -1  # max bound over subtrees left unexplored
        self.fwd = [-1] * self.n

    def out_of_budget(self) -> bool:
        if self.node_limit is not None and self.nodes >= self.node_limit:
            return True
        return self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline

    def _image(self, u, assigned):
        m = 0
        rest = self.a1[u] & assigned
        fwd = self.fwd
        while rest:
            low = rest & -rest
            m |= 1 << fwd[low.bit_length() - 1]
            rest ^= low
        return m

    def bound_terms(self, depth, assigned, used):
        """Per-vertex best gains towards assigned vertices, plus the inner-edge cap."""
        a1, a2 = self.a1, self.a2
        free1 = ~assigned
        unused = [x for x in range(self.n) if not (used >> x) & 1]
        free2 = 0
        for x in unused:
            free2 |= 1 << x
        b2max = max((a2[x] & free2).bit_count() for x in unused) if unused else 0
        e2 = sum((a2[x] & free2).bit_count() for x in unused) // 2
        outer = 0
        half = 0
        e1 = 0
        for u in self.order[depth:]:
            img = self._image(u, assigned)
            if img:
                outer += max((a2[x] & img).bit_count() for x in unused)
            b = (a1[u] & free1).bit_count()
            e1 += b
            half += min(b, b2max)
        inner = min(e1 // 2, e2, half // 2)
        return outer, inner

    def run(self, depth, assigned, used, cur, prefix=None):
        self.nodes += 1
        if depth == self.n:
            if cur > self.best_c:
                self.best_c = cur
                self.best_fwd = list(self.fwd)
            return
        u = self.order[depth]
        img = self._image(u, assigned)
        a2 = self.a2
        cands = []
        for x in range(self.n):
            if not (used >> x) & 1:
                cands.append(((a2[x] & img).bit_count(), x))
        cands.sort(key=lambda gx: (-gx[0], gx[1]))
        if prefix is not None:
            cands = [gx for gx in cands if gx[1] in prefix]
        outer, inner = self.bound_terms(depth, assigned, used)
        top = cands[0][0] if cands else 0
        # admissible for every child: fix u's gain, keep the other terms
        base = cur + outer - top + inner
        for i, (g, x) in enumerate(cands):
            ub = base + g
            if ub <= self.best_c:
                break  # gains are sorted, the rest are no better
            if self.out_of_budget():
                self.open_upper = max(self.open_upper, ub)
                return
            self.fwd[u] = x
            self.run(depth + 1, assigned | (1 << u), used | (1 << x), cur + g)
            self.fwd[u] = -1


def _search_branch(args):
    g1, g2, incumbent, node_limit, time_limit, firsts = args
    deadline = None if time_limit is None else time.monotonic() + time_limit
    s = _Search(g1, g2, incumbent, node_limit, deadline)
    s.run(0, 0, 0, 0, prefix=set(firsts))
    return s.best_c, tuple(s.best_fwd), s.open_upper, s.nodes


def max_common_edges(
    g1: Triangulation,
    g2: Triangulation,
    *,
    node_limit: int | None = None,
    budget_ms: int | None = None,
    workers: int = 1,
    seed: int = 12345,
) -> MaxCommonResult:
    """Maximise the common-edge count over all vertex bijections.

    Depth-first branch and bound over assignments of ``g1`` vertices (highest
    degree first), warm-started by :func:`local_search`.  A subtree is pruned
    when ``current + sum of best per-vertex gains towards assigned vertices +
    a cap on edges among unassigned vertices`` cannot beat the incumbent.
    When a budget stops the search early, ``upper`` is the largest bound of
    any subtree that was not explored, so it stays a valid upper bound.
    """
    _check_sizes(g1, g2)
    n = g1.n
    incumbent = local_search(g1, g2, seed=seed)
    trivial = min(3 * n - 6, len(g1.edge_set))
    if incumbent.c == trivial:
        return MaxCommonResult(incumbent.c, trivial, incumbent, 0)
    time_limit = None if budget_ms is None else budget_ms / 1000.0
    if workers <= 1:
        deadline = None if time_limit is None else time.monotonic() + time_limit
        s = _Search(g1, g2, incumbent, node_limit, deadline)
        s.run(0, 0, 0, 0)
        best_c, best_fwd, open_upper, nodes = s.best_c, tuple(s.best_fwd), s.open_upper, s.nodes
    else:
        # one job per image of the first vertex; each job keeps its own incumbent
        per_job = None if node_limit is None else max(1, node_limit // n)
        jobs = [(g1, g2, incumbent, per_job, time_limit, [x]) for x in range(n)]
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_search_branch, jobs))
        best_c, best_fwd = incumbent.c, incumbent.forward
        open_upper, nodes = -1, 0
        for c, fwd, ou, k in results:
            if c > best_c:
                best_c, best_fwd = c, fwd
            open_upper = max(open_upper, ou)
            nodes += k
    upper = min(trivial, max(best_c, open_upper))
    witness = _with_count(g1, g2, best_fwd)
    assert witness.c == best_c
    return MaxCommonResult(best_c, upper, witness, nodes)


def exhaustive_max_common_edges(g1: Triangulation, g2: Triangulation) -> MaxCommonResult:
    """Evaluate every one of the ``n!`` bijections (vectorised; n <= 10)."""
    _check_sizes(g1, g2)
    n = g1.n
    if n > 10:
        raise ValueError("exhaustive search is limited to n <= 10")
    adj2 = np.zeros((n, n), dtype=np.int8)
    for u, v in g2.edge_set:
        adj2[u, v] = adj2[v, u] = 1
    e1 = np.array(sorted(g1.edge_set), dtype=np.intp)
    best, best_perm = -1, None
    chunk = 1 << 16
    it = permutations(range(n))
    while True:
        block = np.fromiter(
            (x for p in _take(it, chunk) for x in p), dtype=np.intp
        ).reshape(-1, n)
        if block.size == 0:
            break
        counts = adj2[block[:, e1[:, 0]], block[:, e1[:, 1]]].sum(axis=1, dtype=np.int64)
        i = int(np.argmax(counts))
        if counts[i] > best:
            best, best_perm = int(counts[i]), tuple(int(x) for x in block[i])
    witness = VertexBijection(best_perm, best)
    return MaxCommonResult(best, best, witness, math.factorial(n))


def _take(it, k):
    for _ in range(k):
        try:
            yield next(it)
        except StopIteration:
            return


# ---------------------------------------------------------------------------
# flip lower bounds
# ---------------------------------------------------------------------------

def lemma1_bound(g1: Triangulation, g2: Triangulation, mc: MaxCommonResult) -> FlipLowerBound:
    """``3n - 6 - upper``: flips needed to turn ``g1`` into ``g2``.

    Uses the proved upper bound on the maximum, so it is sound even when the
    search was cut short.
    """
    _check_sizes(g1, g2)
    return FlipLowerBound(max(0, 3 * g1.n - 6 - mc.upper), mc.exact)


@dataclass(frozen=True)
class TheoremBound:
    n: int
    value: int  # 3n - 6 - (2 floor(n/3) + 28)
    relaxed: Fraction  # 7n/3 - 34

    @property
    def holds(self) -> bool:
        return self.value >= self.relaxed


def theorem_bound(n: int) -> TheoremBound:
    """Diameter lower bound from the G1/G2 pair and its linear relaxation."""
    if n < 3:
        raise ValueError("n must be at least 3")
    tb = TheoremBound(n, 3 * n - 6 - lemma2_bound(n), Fraction(7 * n, 3) - 34)
    assert tb.holds, tb
    return tb


def theorem_bound_violations(n_max: int, n_min: int = 3) -> np.ndarray:
    """All ``n`` in ``[n_min, n_max]`` where the relaxation would fail."""
    n = np.arange(n_min, n_max + 1, dtype=np.int64)
    value = 3 * n - 6 - (2 * (n // 3) + 28)
    # value >= 7n/3 - 34  <=>  3 value >= 7n - 102
    return n[3 * value < 7 * n - 102]
