"""Forcing repeated degrees by bounded vertex deletion.

``equalize`` runs the general pipeline on an edge-weighted complete graph:
pick a tight degree window of s = R_{r+1}(k) vertices, find a monochromatic
k-clique K inside it, encode every outside vertex as a vector of weight
differences against K, trim the encoding to a short subsequence with the
same total, and delete the corresponding vertices.  ``equalize_three`` is
the specialised procedure that reaches three equal degrees in any simple
graph with at most 6 deletions, with an exhaustive bounded fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import oracle as _oracle
from .errors import ContractError, InternalInvariantError
from .graphs import (
    DeletionCertificate,
    SimpleGraph,
    WeightedCompleteGraph,
    delete_vertices,
    rep,
    verify_certificate,
)
from .zerosum import IntVecSeq, size_bound, trim_to_sum

# Exactly known multicolor Ramsey values, keyed by sorted clique sizes.
# Cases with a part equal to 1 or 2 and the one-color case are handled by
# closed rules before lookup.
RAMSEY_TABLE: dict[tuple[int, ...], int] = {
    (3, 3): 6,
    (3, 4): 9,
    (3, 5): 14,
    (3, 6): 18,
    (3, 7): 23,
    (3, 8): 28,
    (3, 9): 36,
    (4, 4): 18,
    (4, 5): 25,
    (3, 3, 3): 17,
}


@dataclass(frozen=True)
class RamseyBound:
    """An integer s guaranteed >= R_colors(k); exact only for known values."""

    colors: int
    k: int
    value: int
    exact: bool


@dataclass(frozen=True)
class EqualizeParams:
    """Derived constants of the deletion pipeline for parameters (k, r)."""

    k: int
    r: int
    s: int
    C: int
    N: int


@lru_cache(maxsize=None)
def _ramsey_multiset(parts: tuple[int, ...]) -> int:
    if any(p == 1 for p in parts):
        return 1
    parts = tuple(sorted(p for p in parts if p != 2))
    if not parts:
        return 2
    if len(parts) == 1:
        return parts[0]
    if parts in RAMSEY_TABLE:
        return RAMSEY_TABLE[parts]
    total = 2 - len(parts)
    for i in range(len(parts)):
        smaller = tuple(sorted(parts[:i] + (parts[i] - 1,) + parts[i + 1 :]))
        total += _ramsey_multiset(smaller)
    return total


def ramsey_upper(colors: int, k: int) -> RamseyBound:
    """An upper bound for the multicolored Ramsey number R_colors(k).

    Exact small values come from the built-in table (and the closed rules
    for k <= 2 or a single color); otherwise the memoized recurrence
    R(k_1..k_m) <= 2 - m + sum_i R(.., k_i - 1, ..) is used.  Python
    integers make overflow impossible.
    """
    if colors < 1 or k < 1:
        raise ContractError("ramsey_upper: need colors >= 1 and k >= 1")
    parts = tuple([k] * colors)
    value = _ramsey_multiset(parts)
    exact = k <= 2 or colors == 1 or tuple(sorted(parts)) in RAMSEY_TABLE
    return RamseyBound(colors, k, value, exact)


def threshold(k: int, r: int) -> EqualizeParams:
    """The deletion threshold C(k, r) = max{s^2, k + (s+2)(2r(k-1)+1)^(k-1)}."""
    if k < 2:
        raise ContractError("threshold: need k >= 2")
    if r < 1:
        raise ContractError("threshold: need r >= 1")
    s = ramsey_upper(r + 1, k).value
    n_budget = (s + 2) * (2 * r * (k - 1) + 1) ** (k - 1)
    return EqualizeParams(k, r, s, max(s * s, k + n_budget), n_budget)


def tight_degree_window(g: WeightedCompleteGraph, s: int) -> tuple[int, ...]:
    """s vertices whose weighted degrees pairwise differ by at most s*r.

    Vertices are sorted by (degree, index) and consecutive windows scanned;
    for n >= s^2 one window always qualifies.
    """
    if g.n < s * s:
        raise ContractError(f"tight_degree_window: n = {g.n} below s^2 = {s * s}")
    degs = g.degrees()
    order = sorted(range(g.n), key=lambda v: (degs[v], v))
    for t in range(g.n - s + 1):
        window = order[t : t + s]
        if degs[window[-1]] - degs[window[0]] <= s * g.r:
            return tuple(sorted(window))
    raise InternalInvariantError("no degree window of spread <= s*r despite n >= s^2")


def monochromatic_clique(
    g: WeightedCompleteGraph, S: tuple[int, ...], k: int
) -> tuple[tuple[int, ...], int]:
    """A k-subset of S whose internal edges all carry one weight p.

    Searches weight classes in ascending weight order and returns the
    lexicographically least clique of the first class containing one.
    Existence is guaranteed when |S| >= R_{r+1}(k).
    """
    if len(S) < ramsey_upper(g.r + 1, k).value:
        raise ContractError("monochromatic_clique: |S| below the Ramsey bound")
    S = tuple(sorted(S))
    for p in range(g.r + 1):
        for cand in combinations(S, k):
            if all(g.weight(u, v) == p for u, v in combinations(cand, 2)):
                return cand, p
    raise InternalInvariantError("no monochromatic clique despite the Ramsey bound")


def _rep_certificate(g, k: int) -> DeletionCertificate | None:
    """Empty certificate when the graph already has min(k, n) equal degrees."""
    degs = g.degrees()
    counts: dict[int, int] = {}
    for value in degs:
        counts[value] = counts.get(value, 0) + 1
    best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    if best[1] < min(k, g.n):
        return None
    witness = tuple(sorted(g.labels[v] for v in range(g.n) if degs[v] == best[0]))
    return DeletionCertificate((), witness, best[0], k)


def equalize(g: WeightedCompleteGraph, k: int) -> DeletionCertificate:
    """Delete at most C(k, r) vertices so min(k, survivors) degrees repeat.

    Small graphs (n < C) keep two vertices, which always share a degree.
    Otherwise the window/clique/encode/trim pipeline deletes the at most
    N vertices whose difference vectors the trim selected, leaving the
    clique K with equal degrees.
    """
    if k < 2:
        raise ContractError("equalize: need k >= 2")
    if g.n < 1:
        raise ContractError("equalize: graph must have at least one vertex")
    params = threshold(k, g.r)

    cert = _rep_certificate(g, k)
    if cert is None and g.n < params.C:
        keep = [0, 1]
        deleted = tuple(sorted(g.labels[v] for v in range(g.n) if v not in keep))
        witness = tuple(sorted(g.labels[v] for v in keep))
        cert = DeletionCertificate(deleted, witness, g.weight(0, 1), k)
    if cert is None:
        cert = _equalize_pipeline(g, k, params)
    if not verify_certificate(g, cert, k):
        raise InternalInvariantError("equalize produced a non-verifying certificate")
    if len(cert.deleted) > params.C:
        raise InternalInvariantError("equalize exceeded the deletion threshold")
    return cert


def _equalize_pipeline(
    g: WeightedCompleteGraph, k: int, params: EqualizeParams
) -> DeletionCertificate:
    S = tight_degree_window(g, params.s)
    K, _p = monochromatic_clique(g, S, k)
    anchor = K[-1]
    in_clique = set(K)
    outside = [v for v in range(g.n) if v not in in_clique]
    vecs = tuple(
        tuple(g.weight(K[j], v) - g.weight(anchor, v) for j in range(k - 1))
        for v in outside
    )
    degs = g.degrees()
    q = params.s * g.r
    for j in range(k - 1):
        coord_total = sum(x[j] for x in vecs)
        if coord_total != degs[K[j]] - degs[anchor]:
            raise InternalInvariantError("difference vectors violate the degree identity")
        if abs(coord_total) > q:
            raise InternalInvariantError("encoded total escaped [-sr, sr]")

    seq = IntVecSeq(k - 1, g.r, vecs)
    selected = trim_to_sum(seq, q)
    if len(selected) > params.N:
        raise InternalInvariantError("trim kept more than the pipeline budget")
    deleted = tuple(sorted(g.labels[outside[t]] for t in selected))
    survivor = delete_vertices(g, deleted)
    by_label = dict(zip(survivor.labels, survivor.degrees()))
    clique_degrees = {by_label[g.labels[v]] for v in K}
    if len(clique_degrees) != 1:
        raise InternalInvariantError("clique degrees were not equalized")
    witness = tuple(sorted(g.labels[v] for v in K))
    return DeletionCertificate(deleted, witness, clique_degrees.pop(), k)


def choose_xyz(g: SimpleGraph, X) -> tuple[int, int, int]:
    """A degree-sorted triple (x, y, z) of X with x adjacent to y iff to z.

    X must induce five vertices: a triangle or an independent triple is
    returned when present (lexicographically least, then degree-sorted);
    otherwise X induces a 5-cycle and the minimum-degree vertex of X with
    its two cycle neighbors is returned.  In every case (y,z) being an
    edge implies the triple is a triangle.
    """
    X = tuple(sorted(X))
    if len(X) != 5 or len(set(X)) != 5:
        raise ContractError("choose_xyz: X must contain 5 distinct vertices")
    degs = g.degrees()

    def by_degree(tri):
        return tuple(sorted(tri, key=lambda v: (degs[v], v)))

    triple = None
    for cand in combinations(X, 3):
        if all(g.has_edge(u, v) for u, v in combinations(cand, 2)):
            triple = by_degree(cand)
            break
    if triple is None:
        for cand in combinations(X, 3):
            if not any(g.has_edge(u, v) for u, v in combinations(cand, 2)):
                triple = by_degree(cand)
                break
    if triple is None:
        inner = {v: [u for u in X if u != v and g.has_edge(u, v)] for v in X}
        if any(len(nb) != 2 for nb in inner.values()):
            raise InternalInvariantError("trichotomy failed: X is not a 5-cycle")
        low = min(X, key=lambda v: (degs[v], v))
        a, b = sorted(inner[low], key=lambda v: (degs[v], v))
        triple = (low, a, b)

    x, y, z = triple
    if g.has_edge(x, y) != g.has_edge(x, z):
        raise InternalInvariantError("selected triple violates the adjacency property")
    if g.has_edge(y, z) and not (g.has_edge(x, y) and g.has_edge(x, z)):
        raise InternalInvariantError("edge (y,z) without a triangle")
    return x, y, z


def _window5(g: SimpleGraph) -> tuple[int, ...] | None:
    degs = g.degrees()
    order = sorted(range(g.n), key=lambda v: (degs[v], v))
    for t in range(g.n - 4):
        window = order[t : t + 5]
        if degs[window[-1]] - degs[window[0]] <= 3:
            return tuple(sorted(window))
    return None


def equalize_three(g: SimpleGraph) -> DeletionCertificate:
    """Delete at most 6 vertices of a simple graph to repeat a degree 3 times.

    Runs the two-phase deletion around a degree-sorted triple (x, y, z)
    from a 5-vertex window of degree spread <= 3.  Whenever a prescribed
    deletion set is empty or the budget of 6 would be exceeded, an
    exhaustive search over deletion sets of size <= 6 takes over and the
    certificate is flagged ``fallback_engaged``.  Graphs with fewer than
    5 vertices go straight to the exhaustive oracle search.
    """
    if g.n < 1:
        raise ContractError("equalize_three: graph must have at least one vertex")
    if g.n < 5:
        cert = _exhaustive_fallback(g, flag=False)
        cert.fallback_engaged = False
        return cert

    cert = _rep_certificate(g, 3)
    if cert is not None:
        if not verify_certificate(g, cert, 3):
            raise InternalInvariantError("repetition fast path failed verification")
        return cert

    cert = _two_phase(g)
    if cert is None:
        cert = _exhaustive_fallback(g, flag=True)
    if not verify_certificate(g, cert, 3):
        raise InternalInvariantError("equalize_three produced a non-verifying certificate")
    if len(cert.deleted) > 6:
        raise InternalInvariantError("equalize_three exceeded 6 deletions")
    return cert


def _two_phase(g: SimpleGraph) -> DeletionCertificate | None:
    """The primary deletion procedure; None signals the fallback."""
    window = _window5(g)
    if window is None:
        return None
    x, y, z = choose_xyz(g, window)
    adj = g.adj
    alive = (1 << g.n) - 1
    excl = 1 << x | 1 << y | 1 << z
    deleted: list[int] = []

    def low_bit(mask: int) -> int:
        return (mask & -mask).bit_length() - 1

    for _ in range(16):
        nx_, ny_, nz_ = adj[x] & alive, adj[y] & alive, adj[z] & alive
        dx, dy, dz = nx_.bit_count(), ny_.bit_count(), nz_.bit_count()
        if dx == dy == dz:
            witness = tuple(sorted(g.labels[v] for v in (x, y, z)))
            return DeletionCertificate(tuple(sorted(deleted)), witness, dx, 3)
        if not dx <= dy <= dz:
            return None
        if dz > dy:
            cand = nz_ & ~ny_ & ~excl
            if not cand:
                return None
            if len(deleted) + 1 > 6:
                return None
            preferred = cand & ~nx_
            u = low_bit(preferred if preferred else cand)
            alive &= ~(1 << u)
            deleted.append(g.labels[u])
        else:
            common = ny_ & nz_ & ~nx_ & ~excl
            if common:
                if len(deleted) + 1 > 6:
                    return None
                u = low_bit(common)
                alive &= ~(1 << u)
                deleted.append(g.labels[u])
            else:
                cz = nz_ & ~nx_ & ~excl
                cy = ny_ & ~nx_ & ~excl
                if not cz or not cy or len(deleted) + 2 > 6:
                    return None
                for u in (low_bit(cz), low_bit(cy)):
                    alive &= ~(1 << u)
                    deleted.append(g.labels[u])
    return None


def _exhaustive_fallback(g: SimpleGraph, flag: bool) -> DeletionCertificate:
    """Smallest deletion set of size <= 6 reaching min(3, survivors) equal degrees."""
    budget = min(6, max(g.n - 1, 0))
    result = _oracle.min_deletions(g, 3, budget)
    if result is None:
        raise InternalInvariantError("no deletion set of size <= 6 exists")
    common = None
    survivor = delete_vertices(g, result.witness_deletion)
    degs = dict(zip(survivor.labels, survivor.degrees()))
    common = degs[result.witness_equal_set[0]]
    return DeletionCertificate(
        deleted=tuple(sorted(result.witness_deletion)),
        witness=result.witness_equal_set,
        common_degree=common,
        k=3,
        fallback_engaged=flag,
    )
