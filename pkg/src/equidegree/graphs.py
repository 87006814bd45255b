"""Core graph data model: simple graphs, edge-weighted complete graphs,
degree/repetition profiles, vertex deletion, graph6 and JSON I/O.

Vertices of a fresh graph are labeled 0..n-1.  Deletion produces an induced
(sub)graph whose ``labels`` map positional indices back to the original
labels, so certificates always refer to original vertices.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ContractError, FormatError

GRAPH6_MAX_N = 62


def _default_labels(n: int) -> tuple[int, ...]:
    return tuple(range(n))


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph; ``adj[i]`` is the neighbor bitmask of vertex i."""

    n: int
    adj: tuple[int, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractError("SimpleGraph: negative vertex count")
        if len(self.adj) != self.n:
            raise ContractError("SimpleGraph: adjacency length mismatch")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(self.n))
        elif len(self.labels) != self.n:
            raise ContractError("SimpleGraph: labels length mismatch")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ContractError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u},{v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            m = self.adj[u] >> (u + 1) << (u + 1)
            while m:
                v = (m & -m).bit_length() - 1
                yield (u, v)
                m &= m - 1

    def degrees(self) -> tuple[int, ...]:
        return tuple(a.bit_count() for a in self.adj)


@dataclass(frozen=True)
class WeightedCompleteGraph:
    """Complete graph with integer edge weights in {0..r}.

    ``weights`` stores the upper triangle in row-major pair order
    (0,1),(0,2),...,(n-2,n-1).
    """

    n: int
    r: int
    weights: tuple[int, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractError("WeightedCompleteGraph: negative vertex count")
        if self.r < 1:
            raise ContractError("WeightedCompleteGraph: weight bound r must be >= 1")
        if len(self.weights) != self.n * (self.n - 1) // 2:
            raise ContractError("WeightedCompleteGraph: weight table size mismatch")
        for w in self.weights:
            if not 0 <= w <= self.r:
                raise ContractError(f"weight {w} outside 0..{self.r}")
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(self.n))
        elif len(self.labels) != self.n:
            raise ContractError("WeightedCompleteGraph: labels length mismatch")

    def _pair(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if i == j or not 0 <= i < self.n or not j < self.n:
            raise ContractError(f"bad vertex pair ({i},{j})")
        return i * (2 * self.n - i - 1) // 2 + (j - i - 1)

    def weight(self, i: int, j: int) -> int:
        return self.weights[self._pair(i, j)]

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        w = self.weights
        t = 0
        for i in range(self.n):
            di = deg[i]
            for j in range(i + 1, self.n):
                x = w[t]
                t += 1
                di += x
                deg[j] += x
            deg[i] = di
        return tuple(deg)


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex degrees and the repetition number (max degree multiplicity)."""

    degrees: tuple[int, ...]
    rep: int


@dataclass
class DeletionCertificate:
    """Deleted vertices plus equal-degree survivors witnessing repetition >= min(k, survivors)."""

    deleted: tuple[int, ...]
    witness: tuple[int, ...]
    common_degree: int
    k: int
    verified: bool = False
    fallback_engaged: bool = False


Graph = SimpleGraph | WeightedCompleteGraph


def rep(g: Graph) -> DegreeProfile:
    """Degrees by summation and the maximum multiplicity of a degree value."""
    if g.n < 1:
        raise ContractError("rep: graph must have at least one vertex")
    degs = g.degrees()
    return DegreeProfile(degs, max(Counter(degs).values()))


def delete_vertices(g: Graph, deleted: Iterable[int]) -> Graph:
    """Induced graph on the complement of ``deleted`` (a set of labels)."""
    dset = set(deleted)
    if not dset <= set(g.labels):
        raise ContractError(f"delete_vertices: labels {sorted(dset - set(g.labels))} not in graph")
    keep = [i for i in range(g.n) if g.labels[i] not in dset]
    labels = tuple(g.labels[i] for i in keep)
    if isinstance(g, SimpleGraph):
        pos = {old: new for new, old in enumerate(keep)}
        adj = [0] * len(keep)
        for new, old in enumerate(keep):
            m = g.adj[old]
            row = 0
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                if g.labels[v] not in dset:
                    row |= 1 << pos[v]
            adj[new] = row
        return SimpleGraph(len(keep), tuple(adj), labels)
    weights = tuple(
        g.weight(keep[i], keep[j])
        for i in range(len(keep))
        for j in range(i + 1, len(keep))
    )
    return WeightedCompleteGraph(len(keep), g.r, weights, labels)


def from_simple(g: SimpleGraph) -> WeightedCompleteGraph:
    """View a simple graph as a complete graph with weights in {0,1}."""
    weights = tuple(
        1 if g.has_edge(i, j) else 0
        for i in range(g.n)
        for j in range(i + 1, g.n)
    )
    return WeightedCompleteGraph(g.n, 1, weights, g.labels)


def to_simple(g: WeightedCompleteGraph) -> SimpleGraph:
    """Inverse of :func:`from_simple`; requires every weight in {0,1}."""
    if any(w > 1 for w in g.weights):
        raise ContractError("to_simple: graph has weights above 1")
    edges = [
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if g.weight(i, j) == 1
    ]
    sg = SimpleGraph.from_edges(g.n, edges)
    return SimpleGraph(sg.n, sg.adj, g.labels)


def verify_certificate(g: Graph, cert: DeletionCertificate, k: int) -> bool:
    """True iff deleting ``cert.deleted`` leaves all witness vertices on one
    common degree and the witness is large enough (>= min(k, survivors)).

    Sets ``cert.verified`` to the outcome.
    """
    label_set = set(g.labels)
    for v in tuple(cert.deleted) + tuple(cert.witness):
        if v not in label_set:
            raise ContractError(f"certificate refers to unknown vertex {v}")
    ok = not set(cert.deleted) & set(cert.witness)
    if ok:
        h = delete_vertices(g, cert.deleted)
        if h.n == 0:
            ok = len(cert.witness) == 0
        else:
            degs = dict(zip(h.labels, h.degrees()))
            ok = all(degs.get(v) == cert.common_degree for v in cert.witness)
            ok = ok and len(cert.witness) >= min(k, h.n)
    cert.verified = ok
    return ok


# ---------------------------------------------------------------------------
# graph6 codec (single-byte size form, n <= 62)
# ---------------------------------------------------------------------------

def parse_graph6(line: str) -> SimpleGraph:
    """Decode one graph6 line.

    Layout: size byte 63+n, then the upper triangle read column by column,
    packed big-endian 6 bits per byte, each byte offset by 63 and the tail
    zero-padded.  Only the single-byte size form (n <= 62) is accepted.
    """
    s = line.strip()
    if not s:
        raise FormatError("graph6: empty line")
    b0 = ord(s[0])
    if b0 == 126:
        raise FormatError("graph6: multi-byte size form (n >= 63) not supported")
    if not 63 <= b0 <= 125:
        raise FormatError(f"graph6: invalid byte {b0} at offset 0")
    n = b0 - 63
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(s) - 1 < need:
        raise FormatError(f"graph6: truncated bit stream (need {need} data bytes, got {len(s) - 1})")
    if len(s) - 1 > need:
        raise FormatError(f"graph6: {len(s) - 1 - need} trailing bytes beyond the bit stream")
    bits: list[int] = []
    for off, ch in enumerate(s[1:], start=1):
        v = ord(ch) - 63
        if not 0 <= v <= 63:
            raise FormatError(f"graph6: invalid byte {ord(ch)} at offset {off}")
        bits.extend((v >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[nbits:]):
        raise FormatError("graph6: nonzero padding bits")
    adj = [0] * n
    t = 0
    for j in range(1, n):
        for i in range(j):
            if bits[t]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            t += 1
    return SimpleGraph(n, tuple(adj))


def write_graph6(g: SimpleGraph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ContractError(f"graph6 output limited to n <= {GRAPH6_MAX_N}, got {g.n}")
    bits: list[int] = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(63 + g.n)]
    for t in range(0, len(bits), 6):
        v = 0
        for b in bits[t : t + 6]:
            v = v << 1 | b
        out.append(chr(63 + v))
    return "".join(out)


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------

def weighted_to_json(g: WeightedCompleteGraph) -> str:
    return json.dumps({"n": g.n, "r": g.r, "weights": list(g.weights)})


def weighted_from_json(text: str) -> WeightedCompleteGraph:
    try:
        obj = json.loads(text)
        return WeightedCompleteGraph(int(obj["n"]), int(obj["r"]), tuple(int(w) for w in obj["weights"]))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"weighted-graph JSON: {exc}") from exc


def simple_to_json(g: SimpleGraph) -> str:
    adj = [[v for v in range(g.n) if g.has_edge(u, v)] for u in range(g.n)]
    return json.dumps({"n": g.n, "adj": adj})


def simple_from_json(text: str) -> SimpleGraph:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        edges = [(u, int(v)) for u, row in enumerate(obj["adj"]) for v in row if u < int(v)]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"simple-graph JSON: {exc}") from exc
    return SimpleGraph.from_edges(n, edges)


def certificate_to_json(cert: DeletionCertificate) -> str:
    return json.dumps(
        {
            "deleted": sorted(cert.deleted),
            "witness": sorted(cert.witness),
            "common_degree": cert.common_degree,
            "k": cert.k,
            "verified": cert.verified,
            "fallback_engaged": cert.fallback_engaged,
        }
    )


def certificate_from_json(text: str) -> DeletionCertificate:
    try:
        obj = json.loads(text)
        return DeletionCertificate(
            deleted=tuple(obj["deleted"]),
            witness=tuple(obj["witness"]),
            common_degree=int(obj["common_degree"]),
            k=int(obj["k"]),
            verified=bool(obj.get("verified", False)),
            fallback_engaged=bool(obj.get("fallback_engaged", False)),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"certificate JSON: {exc}") from exc
