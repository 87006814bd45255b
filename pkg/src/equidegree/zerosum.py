"""Zero-sum subsequence machinery over bounded integer vectors.

Three layers, all exact:

* ``steinitz_reorder`` permutes a zero-sum sequence of vectors from
  [-r,r]^d so that every prefix sum has l-infinity norm at most r*d,
  via a chain of nested index sets and vertex walks
  (:func:`equidegree.exactarith.walk_to_vertex`).
* ``find_zero_sum_subsequence`` extracts a nonempty proper zero-sum
  subsequence from any long-enough sequence whose total lies in
  [-q,q]^d, by appending greedy completion vectors, reordering, and
  bucketing repeated integer prefix sums.
* ``trim_to_sum`` repeatedly removes zero-sum subsequences until at most
  ``size_bound(r, d, q)`` elements remain, preserving the total exactly.

All positions are 0-based; the CLI layer converts to the 1-based lists
used by the text format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContractError,
    FormatError,
    InfeasibleCompletionError,
    InternalInvariantError,
)
from .exactarith import RationalPoint, walk_to_vertex

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntVecSeq:
    """A sequence of d-dimensional integer vectors with entries in [-r, r]."""

    d: int
    r: int
    vectors: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ContractError("IntVecSeq: d must be >= 1")
        if self.r < 1:
            raise ContractError("IntVecSeq: r must be >= 1")
        for t, v in enumerate(self.vectors):
            if len(v) != self.d:
                raise ContractError(f"IntVecSeq: vector {t} has dimension {len(v)} != {self.d}")
            for e in v:
                if not -self.r <= e <= self.r:
                    raise ContractError(f"IntVecSeq: entry {e} of vector {t} outside [-{self.r},{self.r}]")

    def __len__(self) -> int:
        return len(self.vectors)

    def total(self) -> Vector:
        return vec_sum(self.d, self.vectors)


@dataclass(frozen=True)
class ZeroSumWitness:
    """Positions of a nonempty proper subsequence summing to zero."""

    indices: frozenset[int]
    checked: bool


@dataclass(frozen=True)
class PrefixRecord:
    """A permutation together with the integer prefix sums it produces.

    ``permutation[t]`` is the original position of the vector placed at
    output position t; ``prefix_sums[t]`` is the sum of the first t+1
    reordered vectors.
    """

    permutation: tuple[int, ...]
    prefix_sums: tuple[Vector, ...]


def vec_sum(d: int, vectors) -> Vector:
    acc = [0] * d
    for v in vectors:
        for i in range(d):
            acc[i] += v[i]
    return tuple(acc)


def linf(v: Vector) -> int:
    return max((abs(e) for e in v), default=0)


def size_bound(r: int, d: int, q: int) -> int:
    """(ceil(q/r) + 2) * (2rd + 1)^d.

    Sequences at least this long with total in [-q,q]^d always contain a
    nonempty proper zero-sum subsequence.  Exact integer arithmetic;
    Python integers cannot overflow.
    """
    if r < 1 or d < 1:
        raise ContractError("size_bound: need r >= 1 and d >= 1")
    if q < 0:
        raise ContractError("size_bound: need q >= 0")
    p = -(-q // r)
    return (p + 2) * (2 * r * d + 1) ** d


def artificial_completion(w: Vector, r: int, p: int) -> list[Vector]:
    """Exactly p vectors with entries in [-r, r] summing to -w.

    Greedy per coordinate: each vector takes ``clamp(remaining, -r, r)``
    of the outstanding balance and subtracts it.
    """
    if r < 1:
        raise ContractError("artificial_completion: need r >= 1")
    if p < 0:
        raise ContractError("artificial_completion: need p >= 0")
    if p * r < linf(w):
        raise InfeasibleCompletionError(
            f"artificial_completion: p*r = {p * r} < max|w| = {linf(w)}"
        )
    remaining = [-e for e in w]
    out: list[Vector] = []
    for _ in range(p):
        vec = []
        for c in range(len(w)):
            step = max(-r, min(r, remaining[c]))
            vec.append(step)
            remaining[c] -= step
        out.append(tuple(vec))
    if any(remaining):
        raise InternalInvariantError("greedy completion left a nonzero balance")
    return out


def steinitz_reorder(seq: IntVecSeq) -> PrefixRecord:
    """Reorder a zero-sum sequence so every prefix sum has l-inf norm <= r*d.

    Builds the nested chain A_n ⊇ A_{n-1} ⊇ ... ⊇ A_d with exact rational
    weights on A_k summing to k-d and annihilating the vectors; each step
    rescales by (k-1-d)/(k-d), walks to a vertex of the box polytope, and
    sends an index of weight exactly 0 to output position k.  The first d
    output positions hold A_d in ascending order.
    """
    n = len(seq)
    d, r = seq.d, seq.r
    vectors = seq.vectors
    if any(seq.total()):
        raise ContractError("steinitz_reorder: sequence total is not zero")

    order = [-1] * n
    active = list(range(n))
    if n > d:
        cols = {i: vectors[i] + (1,) for i in range(n)}
        alpha: dict[int, Fraction] = {i: Fraction(n - d, n) for i in active}
        for k in range(n, d, -1):
            fac = Fraction(k - 1 - d, k - d)
            for i in active:
                alpha[i] *= fac
            point = RationalPoint(tuple(active), tuple(alpha[i] for i in active))
            vertex = walk_to_vertex(point, cols)
            alpha = dict(zip(vertex.support, vertex.coords))
            _check_chain_state(vectors, active, alpha, k - 1 - d, d, r)
            zero = next((i for i in active if alpha[i] == 0), None)
            if zero is None:
                raise InternalInvariantError("vertex has no zero weight to remove")
            order[k - 1] = zero
            active.remove(zero)
            del alpha[zero]
    order[: len(active)] = active

    prefix: list[Vector] = []
    acc = [0] * d
    for i in order:
        for c in range(d):
            acc[c] += vectors[i][c]
        prefix.append(tuple(acc))
        if linf(prefix[-1]) > r * d:
            raise InternalInvariantError(
                f"prefix sum {prefix[-1]} exceeds the bound {r * d}"
            )
    return PrefixRecord(tuple(order), tuple(prefix))


def _check_chain_state(vectors, active, alpha, target_sum, d, r) -> None:
    """Exact chain invariants: weight total, annihilation, active-set norm."""
    if sum(alpha[i] for i in active) != target_sum:
        raise InternalInvariantError("chain weights do not sum to k-1-d")
    for c in range(d):
        if sum(alpha[i] * vectors[i][c] for i in active) != 0:
            raise InternalInvariantError("chain weights do not annihilate the vectors")
    if linf(vec_sum(d, (vectors[i] for i in active))) > r * d:
        raise InternalInvariantError("active-set sum escaped the prefix bound")


def find_zero_sum_subsequence(seq: IntVecSeq, q: int) -> ZeroSumWitness:
    """A nonempty proper zero-sum subsequence of a long-enough sequence.

    Requires ``len(seq) >= size_bound(seq.r, seq.d, q)`` and a total with
    l-inf norm at most q.  Fast path: any all-zero vector is returned as a
    singleton.  Otherwise p = ceil(q/r) completion vectors are appended,
    the combined zero-sum sequence is reordered, and among the windows
    between equal integer prefix sums the earliest one free of completion
    positions is returned.
    """
    n = len(seq)
    d, r = seq.d, seq.r
    bound = size_bound(r, d, q)
    if n < bound:
        raise ContractError(
            f"find_zero_sum_subsequence: n = {n} below size bound {bound}"
        )
    w = seq.total()
    if linf(w) > q:
        raise ContractError(
            f"find_zero_sum_subsequence: total has norm {linf(w)} > q = {q}"
        )

    zero = (0,) * d
    for i, v in enumerate(seq.vectors):
        if v == zero:
            return ZeroSumWitness(frozenset({i}), checked=True)

    p = -(-q // r)
    arts = artificial_completion(w, r, p)
    combined = IntVecSeq(d, r, seq.vectors + tuple(arts))
    record = steinitz_reorder(combined)

    positions: dict[Vector, list[int]] = {}
    target: Vector | None = None
    for j, value in enumerate(record.prefix_sums, start=1):
        slot = positions.setdefault(value, [])
        slot.append(j)
        if target is None and len(slot) >= p + 2:
            target = value
    if target is None:
        raise InternalInvariantError("no prefix value repeated p+2 times")

    spots = positions[target]
    witness: frozenset[int] | None = None
    for a, b in zip(spots, spots[1:]):
        window = record.permutation[a:b]
        if all(i < n for i in window):
            witness = frozenset(window)
            break
    if witness is None:
        raise InternalInvariantError("every window contained a completion position")
    if not 1 <= len(witness) <= n - 1:
        raise InternalInvariantError("witness is empty or not proper")
    if any(vec_sum(d, (seq.vectors[i] for i in witness))):
        raise InternalInvariantError("witness does not sum to zero")
    return ZeroSumWitness(witness, checked=True)


def trim_to_sum(seq: IntVecSeq, q: int) -> frozenset[int]:
    """Positions of a subsequence of length <= size_bound with the same total.

    Repeatedly extracts a zero-sum witness from the current subsequence and
    drops it; each removal preserves the running total, and properness keeps
    the remainder nonempty.
    """
    d, r = seq.d, seq.r
    z = seq.total()
    if linf(z) > q:
        raise ContractError(f"trim_to_sum: total has norm {linf(z)} > q = {q}")
    bound = size_bound(r, d, q)
    kept = list(range(len(seq)))
    while len(kept) > bound:
        sub = IntVecSeq(d, r, tuple(seq.vectors[i] for i in kept))
        witness = find_zero_sum_subsequence(sub, q)
        kept = [i for t, i in enumerate(kept) if t not in witness.indices]
    if vec_sum(d, (seq.vectors[i] for i in kept)) != z:
        raise InternalInvariantError("trim changed the total")
    return frozenset(kept)


def parse_sequence(text: str) -> tuple[IntVecSeq, int]:
    """Parse the vector-sequence text format: header ``d r q n`` then n rows."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise FormatError("empty vector-sequence input")
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError(f"header must be 'd r q n', got {lines[0]!r}")
    try:
        d, r, q, n = (int(tok) for tok in head)
    except ValueError as exc:
        raise FormatError(f"non-integer header field in {lines[0]!r}") from exc
    if q < 0:
        raise FormatError("header q must be nonnegative")
    if len(lines) - 1 != n:
        raise FormatError(f"expected {n} vector rows, found {len(lines) - 1}")
    vectors = []
    for t, ln in enumerate(lines[1:], start=2):
        toks = ln.split()
        if len(toks) != d:
            raise FormatError(f"line {t}: expected {d} entries, found {len(toks)}")
        try:
            vectors.append(tuple(int(tok) for tok in toks))
        except ValueError as exc:
            raise FormatError(f"line {t}: non-integer entry") from exc
    return IntVecSeq(d, r, tuple(vectors)), q


def format_sequence(seq: IntVecSeq, q: int) -> str:
    rows = [f"{seq.d} {seq.r} {q} {len(seq)}"]
    rows.extend(" ".join(str(e) for e in v) for v in seq.vectors)
    return "\n".join(rows) + "\n"
