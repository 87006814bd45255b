"""Generators for the lower-bound gadgets: an antiregular base graph, the
clique-partition graph D_n whose induced subgraphs have bounded repetition,
and q-blowups with a copy of D_q inside every blob."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import mpmath

from .errors import ContractError, InternalInvariantError
from .graphs import SimpleGraph

_CEIL_MAX_PREC = 4096


@dataclass(frozen=True)
class ConstructionPlan:
    """Derived parameters of a generated graph.

    ``kind`` is "antiregular", "dn" or "blowup"; clique data applies to
    D_n plans, blob data to blowups.
    """

    kind: str
    n: int
    clique_sizes: tuple[int, ...] = ()
    isolated: int = 0
    q: int = 0
    base_n: int = 0
    blob_bounds: tuple[tuple[int, int], ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "n": self.n}
        if self.kind == "dn":
            out["clique_sizes"] = list(self.clique_sizes)
            out["isolated"] = self.isolated
        if self.kind == "blowup":
            out["q"] = self.q
            out["base_n"] = self.base_n
            out["blob_bounds"] = [list(b) for b in self.blob_bounds]
        return out


def antiregular(n: int) -> SimpleGraph:
    """The n-vertex threshold graph with repetition number exactly 2.

    Built by alternately adding a dominating vertex and an isolated vertex;
    its sorted degrees d_1 <= ... <= d_n have exactly one repeated value,
    so d_i - d_j >= floor((i-j)/2) whenever i > j.
    """
    if n < 2:
        raise ContractError("antiregular: need n >= 2")
    adj = [0] * n
    for t in range(1, n):
        if t % 2 == 1:
            for u in range(t):
                adj[u] |= 1 << t
                adj[t] |= 1 << u
    return SimpleGraph(n, tuple(adj))


def _ceil_2n_over_ilog(n: int, i: int) -> int:
    """ceil(2n / (i ln n)) with a certified interval evaluation.

    ln n is irrational for integer n >= 2, so the quotient is never an
    integer and the ceiling stabilizes at finite precision.
    """
    prec = 80
    while prec <= _CEIL_MAX_PREC:
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            val = iv.mpf(2 * n) / (iv.mpf(i) * iv.log(iv.mpf(n)))
            lo = int(mpmath.ceil(val.a))
            hi = int(mpmath.ceil(val.b))
        finally:
            iv.prec = old
        if lo == hi:
            return lo
        prec *= 2
    raise InternalInvariantError(f"ceiling of 2*{n}/({i} ln {n}) did not stabilize")


def dn_graph(n: int) -> tuple[SimpleGraph, ConstructionPlan]:
    """Disjoint cliques of sizes a_i = ceil(2n/(i ln n)) plus isolated rest.

    Cliques are taken while their total stays within n; no induced subgraph
    of the result has more than 3n/ln n vertices of one degree.
    """
    if n < 3:
        raise ContractError("dn_graph: need n >= 3 (ln n must exceed 1)")
    sizes: list[int] = []
    total = 0
    i = 1
    while True:
        a = _ceil_2n_over_ilog(n, i)
        if total + a > n:
            break
        sizes.append(a)
        total += a
        i += 1
    isolated = n - total
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InternalInvariantError("clique sizes are not non-increasing")
    root = math.isqrt(n)
    ceil_sqrt = root if root * root == n else root + 1
    if len(sizes) > ceil_sqrt:
        raise InternalInvariantError("more cliques than ceil(sqrt(n))")
    if isolated > _ceil_2n_over_ilog(n, 1):
        raise InternalInvariantError("isolated remainder exceeds a_1")

    adj = [0] * n
    start = 0
    for a in sizes:
        block = ((1 << a) - 1) << start
        for v in range(start, start + a):
            adj[v] = block & ~(1 << v)
        start += a
    plan = ConstructionPlan(kind="dn", n=n, clique_sizes=tuple(sizes), isolated=isolated)
    return SimpleGraph(n, tuple(adj)), plan


def blowup(h: SimpleGraph, q: int) -> SimpleGraph:
    """q-blowup of h with a copy of D_q inside every blob.

    Base vertices are taken in ascending degree order; blob i occupies
    positions [i*q, (i+1)*q), joined completely to blob j exactly when the
    corresponding base vertices are adjacent.  Every blowup vertex v over
    base vertex b satisfies q*deg(b) <= deg(v) < q*(deg(b)+1).
    """
    if q < 3:
        raise ContractError("blowup: need q >= 3 (D_q must exist)")
    if h.n < 2:
        raise ContractError("blowup: base graph needs at least 2 vertices")
    degs = h.degrees()
    order = sorted(range(h.n), key=lambda v: (degs[v], v))
    inner, _ = dn_graph(q)
    n_out = h.n * q
    block = (1 << q) - 1
    adj = [0] * n_out
    for bi, u in enumerate(order):
        row = 0
        for bj, v in enumerate(order):
            if u != v and h.has_edge(u, v):
                row |= block << (bj * q)
        for t in range(q):
            pos = bi * q + t
            local = inner.adj[t] << (bi * q)
            adj[pos] = row | local
    out = SimpleGraph(n_out, tuple(adj))
    out_degs = out.degrees()
    for bi, u in enumerate(order):
        base = q * degs[u]
        for t in range(q):
            d = out_degs[bi * q + t]
            if not base <= d < base + q:
                raise InternalInvariantError(
                    f"degree sandwich failed at blob {bi} vertex {t}: {d} vs [{base},{base + q})"
                )
    return out


def blowup_plan(h: SimpleGraph, q: int) -> ConstructionPlan:
    return ConstructionPlan(
        kind="blowup",
        n=h.n * q,
        q=q,
        base_n=h.n,
        blob_bounds=tuple((i * q, (i + 1) * q) for i in range(h.n)),
    )


def max_induced_rep_sampled(g: SimpleGraph, samples: int, seed: int) -> int:
    """Largest repetition number over seeded random induced subgraphs.

    Each sample keeps every vertex independently with probability 1/2;
    empty samples count as 0.
    """
    if samples < 1:
        raise ContractError("max_induced_rep_sampled: need samples >= 1")
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        alive = 0
        for v in range(g.n):
            if rng.getrandbits(1):
                alive |= 1 << v
        if not alive:
            continue
        counts: dict[int, int] = {}
        m = alive
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            d = (g.adj[v] & alive).bit_count()
            counts[d] = counts.get(d, 0) + 1
        best = max(best, max(counts.values()))
    return best
