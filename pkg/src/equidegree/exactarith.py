"""Exact rational linear algebra for walking box-constrained points to vertices.

Everything here is exact: no floats, no tolerances.  The central operation is
``walk_to_vertex``, which takes a point of the polytope

    { alpha in [0,1]^support : sum_i alpha_i * column_i = const }

and moves it along kernel directions of the column system until at most
``len(column)`` coordinates remain strictly between 0 and 1.  It is the
engine behind the prefix-bounded reordering in :mod:`equidegree.zerosum`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence

from .errors import ContractError, InternalInvariantError

Column = tuple[int, ...]


def solve_homogeneous_direction(
    columns: Sequence[Sequence[int]],
) -> Optional[tuple[Fraction, ...]]:
    """Find a nonzero rational u with ``sum_j u[j] * columns[j] == 0``.

    Returns None when the columns are linearly independent.  With more
    columns than rows a nonzero solution always exists.  Exact rational
    Gauss-Jordan elimination; overflow is impossible (Python integers).
    """
    if not columns:
        raise ContractError("solve_homogeneous_direction: need at least one column")
    m = len(columns[0])
    if any(len(c) != m for c in columns):
        raise ContractError("solve_homogeneous_direction: columns differ in dimension")
    ncols = len(columns)
    mat = [[Fraction(columns[j][i]) for j in range(ncols)] for i in range(m)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        pr = next((r for r in range(row, m) if mat[r][col] != 0), None)
        if pr is None:
            continue
        mat[row], mat[pr] = mat[pr], mat[row]
        inv = mat[row][col]
        mat[row] = [v / inv for v in mat[row]]
        for r in range(m):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[row])]
        pivot_cols.append(col)
        row += 1
    free = next((c for c in range(ncols) if c not in pivot_cols), None)
    if free is None:
        return None
    u = [Fraction(0)] * ncols
    u[free] = Fraction(1)
    for r, pc in enumerate(pivot_cols):
        u[pc] = -mat[r][free]
    return tuple(u)


@dataclass(frozen=True)
class RationalPoint:
    """Exact point of [0,1]^support, keyed by item index.

    ``support`` lists distinct item indices; ``coords[t]`` is the coordinate
    of item ``support[t]``.
    """

    support: tuple[int, ...]
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.coords):
            raise ContractError("RationalPoint: support/coords length mismatch")
        if len(set(self.support)) != len(self.support):
            raise ContractError("RationalPoint: support indices must be distinct")
        for c in self.coords:
            if not 0 <= c <= 1:
                raise ContractError(f"RationalPoint: coordinate {c} outside [0,1]")

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.support, self.coords))

    def fractional_indices(self) -> tuple[int, ...]:
        return tuple(i for i, c in zip(self.support, self.coords) if 0 < c < 1)


class _Elimination:
    """Integer-scaled elimination over an independent set of integer columns.

    ``reduced[t]`` is an integer vector equal (up to positive scaling) to
    ``columns[t]`` minus its projection on earlier columns, and ``expr[t]``
    holds integer coefficients with
    ``reduced[t] == sum_s expr[t][s] * columns[s]`` exactly.
    """

    def __init__(self, m: int) -> None:
        self.m = m
        self.indices: list[int] = []
        self.columns: list[Column] = []
        self.reduced: list[list[int]] = []
        self.pivots: list[int] = []
        self.expr: list[list[int]] = []

    def try_add(self, idx: int, col: Column) -> Optional[list[int]]:
        """Extend the independent set with ``col`` if possible.

        Returns None when the column is independent (it is then kept);
        otherwise returns a nonzero integer kernel vector over
        ``(columns..., col)``, i.e. coefficients e with
        ``sum_s e[s]*columns[s] + e[-1]*col == 0`` and ``e[-1] != 0``.
        """
        r = list(col)
        e = [0] * len(self.reduced) + [1]
        for t, red in enumerate(self.reduced):
            f = r[self.pivots[t]]
            if f:
                p = red[self.pivots[t]]
                ex = self.expr[t]
                r = [p * a - f * b for a, b in zip(r, red)]
                e = [
                    p * a - f * (ex[s] if s < len(ex) else 0)
                    for s, a in enumerate(e)
                ]
                g = 0
                for v in r:
                    g = gcd(g, v)
                for v in e:
                    g = gcd(g, v)
                if g > 1:
                    r = [v // g for v in r]
                    e = [v // g for v in e]
        if any(r):
            self.indices.append(idx)
            self.columns.append(tuple(col))
            self.reduced.append(r)
            self.pivots.append(next(i for i, v in enumerate(r) if v))
            self.expr.append(e)
            return None
        if e[-1] == 0:
            raise InternalInvariantError("dependent column with zero kernel weight")
        return e

    def remove(self, idx: int) -> None:
        """Drop one column and rebuild the elimination over the rest."""
        pos = self.indices.index(idx)
        keep = [
            (i, c) for t, (i, c) in enumerate(zip(self.indices, self.columns)) if t != pos
        ]
        self.indices = []
        self.columns = []
        self.reduced = []
        self.pivots = []
        self.expr = []
        for i, c in keep:
            if self.try_add(i, c) is not None:
                raise InternalInvariantError("basis subset became dependent")


def _min_step(
    cands: list[tuple[int, int, int]]
) -> tuple[int, int]:
    """Smallest positive step among (numerator, denominator, index) triples."""
    bn, bd = cands[0][0], cands[0][1]
    for n_, d_, _ in cands[1:]:
        if n_ * bd < bn * d_:
            bn, bd = n_, d_
    return bn, bd


def walk_to_vertex(
    point: RationalPoint, columns: Mapping[int, Sequence[int]]
) -> RationalPoint:
    """Walk a feasible point to a vertex of its box-constrained linear system.

    The linear constraints ``sum_i alpha_i * columns[i]`` are preserved
    exactly.  On return, the coordinates strictly inside (0,1) index a
    linearly independent set of columns, hence there are at most
    ``len(column)`` of them.  Moves follow the direction of the smaller
    step; step ties prefer the positive direction, and every coordinate
    that lands exactly on 0 or 1 is frozen (lowest index first).
    """
    if not point.support:
        return point
    m = len(columns[point.support[0]])
    cols: dict[int, Column] = {}
    for i in point.support:
        c = tuple(columns[i])
        if len(c) != m:
            raise ContractError("walk_to_vertex: columns differ in dimension")
        cols[i] = c

    nums: dict[int, int] = {}
    dens: dict[int, int] = {}
    for i, c in zip(point.support, point.coords):
        nums[i] = c.numerator
        dens[i] = c.denominator

    pending = deque(sorted(i for i in point.support if 0 < nums[i] < dens[i]))
    elim = _Elimination(m)
    moves = 0
    while pending:
        j = pending.popleft()
        ker = elim.try_add(j, cols[j])
        if ker is None:
            continue
        sup = elim.indices + [j]
        moved = [(i, u) for i, u in zip(sup, ker) if u != 0]
        plus: list[tuple[int, int, int]] = []
        minus: list[tuple[int, int, int]] = []
        for i, u in moved:
            n_, d_ = nums[i], dens[i]
            if u > 0:
                plus.append((d_ - n_, d_ * u, i))
                minus.append((n_, d_ * u, i))
            else:
                plus.append((n_, d_ * -u, i))
                minus.append((d_ - n_, d_ * -u, i))
        pn, pd = _min_step(plus)
        mn, md = _min_step(minus)
        if pn * md <= mn * pd:
            tn, td = pn, pd
            sign = 1
        else:
            tn, td = mn, md
            sign = -1
        hits: list[int] = []
        for i, u in moved:
            n_, d_ = nums[i], dens[i]
            nn = n_ * td + sign * tn * u * d_
            dd = d_ * td
            g = gcd(nn, dd)
            nn //= g
            dd //= g
            if not 0 <= nn <= dd:
                raise InternalInvariantError("line move left the unit box")
            nums[i], dens[i] = nn, dd
            if nn == 0 or nn == dd:
                hits.append(i)
        moves += 1
        if moves > len(point.support):
            raise InternalInvariantError("vertex walk exceeded its move budget")
        if not hits:
            raise InternalInvariantError("line move froze no coordinate")
        j_hit = False
        for h in hits:
            if h == j:
                j_hit = True
            else:
                elim.remove(h)
        if not j_hit:
            pending.appendleft(j)

    if len(elim.indices) > m:
        raise InternalInvariantError("more fractional coordinates than constraints")
    return RationalPoint(
        point.support,
        tuple(Fraction(nums[i], dens[i]) for i in point.support),
    )
