"""Ground-truth brute force: exact minimum deletion counts and exhaustive
small-graph sweeps.

``min_deletions`` searches deletion sets by increasing size and is the
reference implementation.  ``sweep`` runs it over every labeled graph on n
vertices (n <= 7 built in); for n >= 6 a vectorized engine processes the
enumeration in chunks and is cross-validated against the per-graph path in
the test suite.  ``scan_corpus`` applies the same search to a graph6 file,
optionally partitioned deterministically across worker processes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .errors import ContractError, FormatError
from .graphs import SimpleGraph, parse_graph6, write_graph6

MAX_EXHAUSTIVE_N = 7


@dataclass(frozen=True)
class OracleResult:
    """An exact minimum: no smaller deletion set reaches the target repetition."""

    min_deletions: int
    witness_deletion: tuple[int, ...]
    witness_equal_set: tuple[int, ...]


@dataclass
class SweepReport:
    """Outcome of running the oracle over a graph collection.

    ``exhausted`` counts graphs whose minimum exceeds the budget (their
    true value is unknown and they are excluded from the maximum);
    ``parse_errors`` carries per-line diagnostics from corpus scans.
    """

    n: int | None
    k: int
    graphs_examined: int
    max_min_deletions: int
    extremal_graphs: list[str] = field(default_factory=list)
    exhausted: int = 0
    runtime_seconds: float = 0.0
    parse_errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "graphs_examined": self.graphs_examined,
            "max_min_deletions": self.max_min_deletions,
            "extremal_graphs": list(self.extremal_graphs),
            "exhausted": self.exhausted,
            "runtime_seconds": self.runtime_seconds,
            "parse_errors": list(self.parse_errors),
        }


def _best_degree_class(degs: Sequence[int]) -> tuple[int, int]:
    """(degree value, multiplicity) with maximum multiplicity, ties to the
    smaller degree."""
    counts: dict[int, int] = {}
    for value in degs:
        counts[value] = counts.get(value, 0) + 1
    value, mult = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
    return value, mult


def min_deletions(g: SimpleGraph, k: int, budget: int) -> OracleResult | None:
    """Exact minimum number of deletions to reach min(k, survivors) equal degrees.

    Deletion sets are searched in increasing size, lexicographically within
    a size, so the returned witness is the first success and every smaller
    set provably fails.  Returns None when the budget is exhausted.
    """
    if budget < 0:
        raise ContractError("min_deletions: budget must be >= 0")
    if g.n < 1:
        raise ContractError("min_deletions: graph must have at least one vertex")
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    for size in range(0, min(budget, n - 1) + 1):
        target = min(k, n - size)
        for dels in combinations(range(n), size):
            alive = full
            for v in dels:
                alive &= ~(1 << v)
            degs = [(adj[v] & alive).bit_count() for v in range(n) if alive >> v & 1]
            value, mult = _best_degree_class(degs)
            if mult >= target:
                equal = tuple(
                    sorted(
                        g.labels[v]
                        for v in range(n)
                        if alive >> v & 1 and (adj[v] & alive).bit_count() == value
                    )
                )
                deletion = tuple(sorted(g.labels[v] for v in dels))
                return OracleResult(size, deletion, equal)
    return None


def enumerate_labeled(n: int) -> Iterator[SimpleGraph]:
    """All 2^(n(n-1)/2) labeled graphs on n vertices, in edge-bitmask order."""
    if n < 1:
        raise ContractError("enumerate_labeled: need n >= 1")
    if n > MAX_EXHAUSTIVE_N:
        raise ContractError(
            f"enumerate_labeled: exhaustive mode stops at n = {MAX_EXHAUSTIVE_N}; "
            "supply a corpus and use scan_corpus for larger orders"
        )
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    labels = tuple(range(n))
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        m = mask
        while m:
            t = (m & -m).bit_length() - 1
            m &= m - 1
            i, j = pairs[t]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        yield SimpleGraph(n, tuple(adj), labels)


def _graph_from_mask(n: int, pairs, mask: int) -> SimpleGraph:
    adj = [0] * n
    m = mask
    while m:
        t = (m & -m).bit_length() - 1
        m &= m - 1
        i, j = pairs[t]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return SimpleGraph(n, tuple(adj))


def sweep(n: int, k: int, budget: int, engine: str = "auto") -> SweepReport:
    """Run ``min_deletions`` over every labeled graph on n vertices.

    Graphs already at repetition >= min(k, n) are recorded as 0 by the
    empty deletion set (the first subset searched), which is the only
    pruning applied.  ``engine`` is "python", "numpy" or "auto" (numpy for
    n >= 6); both engines produce identical minima.
    """
    if engine not in ("auto", "python", "numpy"):
        raise ContractError(f"sweep: unknown engine {engine!r}")
    start = time.perf_counter()
    if engine == "auto":
        engine = "numpy" if n >= 6 else "python"
    if engine == "numpy":
        minima = _sweep_minima_numpy(n, k, budget)
    else:
        minima = _sweep_minima_python(n, k, budget)
    report = _report_from_minima(n, k, minima)
    report.runtime_seconds = time.perf_counter() - start
    return report


def sweep_minima(n: int, k: int, budget: int, engine: str = "python") -> list[int]:
    """Per-graph minima in edge-bitmask order (-1 where the budget exhausted)."""
    if engine == "numpy":
        return _sweep_minima_numpy(n, k, budget)
    return _sweep_minima_python(n, k, budget)


def _sweep_minima_python(n: int, k: int, budget: int) -> list[int]:
    out = []
    for g in enumerate_labeled(n):
        res = min_deletions(g, k, budget)
        out.append(-1 if res is None else res.min_deletions)
    return out


def _deletion_subsets(n: int, budget: int) -> list[tuple[int, ...]]:
    subsets: list[tuple[int, ...]] = []
    for size in range(0, min(budget, n - 1) + 1):
        subsets.extend(combinations(range(n), size))
    return subsets


def _sweep_minima_numpy(n: int, k: int, budget: int, chunk_bits: int = 18) -> list[int]:
    import numpy as np

    if n > MAX_EXHAUSTIVE_N:
        raise ContractError(f"sweep: exhaustive mode stops at n = {MAX_EXHAUSTIVE_N}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = len(pairs)
    total = 1 << m
    subsets = _deletion_subsets(n, budget)
    # Incidence of each edge on each survivor, per deletion subset.
    tables = []
    for dels in subsets:
        surv = [v for v in range(n) if v not in dels]
        pos = {v: t for t, v in enumerate(surv)}
        mat = np.zeros((m, len(surv)), dtype=np.int16)
        for e, (i, j) in enumerate(pairs):
            if i in pos and j in pos:
                mat[e, pos[i]] = 1
                mat[e, pos[j]] = 1
        tables.append((len(dels), len(surv), mat))

    minima = np.full(total, -1, dtype=np.int8)
    shift = np.arange(m, dtype=np.int64)
    chunk = 1 << chunk_bits
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        masks = np.arange(lo, hi, dtype=np.int64)
        bits = ((masks[:, None] >> shift) & 1).astype(np.int16)
        res = np.full(hi - lo, -1, dtype=np.int8)
        for size, nsurv, mat in tables:
            open_idx = np.flatnonzero(res < 0)
            if open_idx.size == 0:
                break
            degs = bits[open_idx] @ mat
            degs.sort(axis=1)
            target = min(k, nsurv)
            if target <= 1:
                ok = np.ones(open_idx.size, dtype=bool)
            else:
                ok = np.zeros(open_idx.size, dtype=bool)
                for t in range(nsurv - target + 1):
                    ok |= degs[:, t] == degs[:, t + target - 1]
            res[open_idx[ok]] = size
        minima[lo:hi] = res
    return minima.tolist()


def _report_from_minima(n: int, k: int, minima: list[int]) -> SweepReport:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    resolved = [v for v in minima if v >= 0]
    best = max(resolved) if resolved else 0
    extremal = [
        write_graph6(_graph_from_mask(n, pairs, mask))
        for mask, value in enumerate(minima)
        if value == best
    ]
    return SweepReport(
        n=n,
        k=k,
        graphs_examined=len(minima),
        max_min_deletions=best,
        extremal_graphs=sorted(extremal),
        exhausted=sum(1 for v in minima if v < 0),
    )


# ---------------------------------------------------------------------------
# corpus scans
# ---------------------------------------------------------------------------

def _scan_lines(args: tuple[list[tuple[int, str]], int, int]) -> dict:
    lines, k, budget = args
    max_min = 0
    extremal: list[str] = []
    exhausted = 0
    errors: list[str] = []
    examined = 0
    sizes: set[int] = set()
    for lineno, line in lines:
        if not line.strip():
            continue
        try:
            g = parse_graph6(line)
        except FormatError as exc:
            errors.append(f"line {lineno}: {exc}")
            continue
        examined += 1
        sizes.add(g.n)
        res = min_deletions(g, k, budget)
        if res is None:
            exhausted += 1
            continue
        if res.min_deletions > max_min:
            max_min = res.min_deletions
            extremal = [line.strip()]
        elif res.min_deletions == max_min:
            extremal.append(line.strip())
    return {
        "max": max_min,
        "extremal": extremal,
        "exhausted": exhausted,
        "errors": errors,
        "examined": examined,
        "sizes": sizes,
    }


def scan_corpus(path: str, k: int, budget: int, jobs: int = 1) -> SweepReport:
    """Run the oracle over a graph6 corpus file.

    Malformed lines are reported with their line numbers and skipped.  With
    ``jobs > 1`` the line list is split into contiguous chunks processed by
    worker processes; merging takes maxima and sorts extremal graphs, so
    the report does not depend on the worker count.
    """
    if jobs < 1:
        raise ContractError("scan_corpus: jobs must be >= 1")
    start = time.perf_counter()
    with open(path, "r", encoding="ascii") as fh:
        numbered = [(t + 1, line) for t, line in enumerate(fh)]

    if jobs == 1 or len(numbered) < 2 * jobs:
        results = [_scan_lines((numbered, k, budget))]
    else:
        import multiprocessing

        step = -(-len(numbered) // jobs)
        chunks = [
            (numbered[t : t + step], k, budget) for t in range(0, len(numbered), step)
        ]
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_scan_lines, chunks)

    max_min = max((r["max"] for r in results if r["examined"]), default=0)
    extremal = sorted(
        line for r in results if r["examined"] and r["max"] == max_min
        for line in r["extremal"]
    )
    sizes = set().union(*(r["sizes"] for r in results))
    report = SweepReport(
        n=sizes.pop() if len(sizes) == 1 else None,
        k=k,
        graphs_examined=sum(r["examined"] for r in results),
        max_min_deletions=max_min,
        extremal_graphs=extremal,
        exhausted=sum(r["exhausted"] for r in results),
        parse_errors=[e for r in results for e in r["errors"]],
    )
    report.runtime_seconds = time.perf_counter() - start
    return report
