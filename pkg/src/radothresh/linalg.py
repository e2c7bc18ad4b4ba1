"""Exact integer-matrix linear algebra.

Everything here works over arbitrary-precision Python ints and
``fractions.Fraction``; nothing rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """An immutable l x k integer matrix.

    ``cols`` is stored explicitly so that matrices with zero columns (the
    empty column restriction) keep their row count.
    """

    rows: tuple[tuple[int, ...], ...]
    cols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.cols:
                raise ValueError("ragged matrix: row of length %d, expected %d" % (len(r), self.cols))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if not rows:
            raise ValueError("matrix needs at least one row")
        k = len(rows[0])
        if k == 0:
            raise ValueError("matrix needs at least one column")
        return cls(rows, k)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def max_abs(self) -> int:
        return max((abs(v) for r in self.rows for v in r), default=0)

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows)


def _bareiss_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, nrows):
            a = m[i][c]
            row = m[i]
            prow = m[rank]
            for j in range(c + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                row[j] = (p * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(M: IntMatrix) -> int:
    """Rank over the rationals via fraction-free (Bareiss) elimination."""
    if M.cols == 0:
        return 0
    return _bareiss_rank([list(r) for r in M.rows])


def column_submatrix(M: IntMatrix, I: Iterable[int]) -> IntMatrix:
    """Restrict ``M`` to the columns in ``I`` (0-based), in ascending order."""
    idx = sorted(set(I))
    for j in idx:
        if not 0 <= j < M.cols:
            raise IndexError("column index %d out of range for %d columns" % (j, M.cols))
    return IntMatrix(tuple(tuple(r[j] for j in idx) for r in M.rows), len(idx))


def rank_of_columns(M: IntMatrix, I: Iterable[int]) -> int:
    return rank(column_submatrix(M, I))


def vectors_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a list of equal-length integer vectors."""
    if not vectors:
        return 0
    return _bareiss_rank([list(v) for v in vectors])


def in_rational_span(vectors: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    """True iff ``target`` lies in the Q-span of ``vectors`` (empty span is {0})."""
    n = len(target)
    for v in vectors:
        if len(v) != n:
            raise ValueError("dimension mismatch: %d vs %d" % (len(v), n))
    if not any(target):
        return True
    if not vectors:
        return False
    return vectors_rank(list(vectors) + [list(target)]) == vectors_rank(vectors)


def independent_rows(M: IntMatrix) -> list[int]:
    """Indices of a maximal linearly independent set of rows, greedily from the top."""
    keep: list[int] = []
    for i, r in enumerate(M.rows):
        if vectors_rank([M.rows[j] for j in keep] + [r]) > len(keep):
            keep.append(i)
    return keep


def pivot_columns(M: IntMatrix, prefer: Sequence[int] = ()) -> list[int]:
    """A column basis of ``M``, picked greedily from ``prefer`` first, then
    from the remaining columns in descending index order."""
    order = list(prefer) + [j for j in reversed(range(M.cols)) if j not in prefer]
    chosen: list[int] = []
    cols = M.columns()
    target = rank(M)
    for j in order:
        if len(chosen) == target:
            break
        if vectors_rank([cols[c] for c in chosen] + [cols[j]]) > len(chosen):
            chosen.append(j)
    return sorted(chosen)


def solve_square(rows: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Solve ``S X = R`` for square nonsingular integer ``S``; returns X over Q.

    ``rhs`` is a list of rows (one per row of ``S``), each with m entries.
    """
    n = len(rows)
    m = len(rhs[0]) if rhs else 0
    aug = [[Fraction(v) for v in rows[i]] + [Fraction(v) for v in rhs[i]] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:n + m] for row in aug]
