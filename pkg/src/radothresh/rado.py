"""Rado matrix validation and the densities m(A), m(A, B)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import InputError, NotRadoError, OrderingError
from .linalg import IntMatrix, independent_rows, in_rational_span, rank, vectors_rank
from .solutions import iter_solutions

CONFIRMED = "confirmed"
REFUTED = "refuted-up-to-bound"
UNKNOWN = "unknown"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _members(mask: int, k: int) -> list[int]:
    return [j for j in range(k) if mask >> j & 1]


class _ColumnRanks:
    """Memoised rank of column subsets, keyed by bitmask."""

    def __init__(self, A: IntMatrix):
        self.cols = A.columns()
        self.k = A.cols
        self._cache: dict[int, int] = {0: 0}

    def __call__(self, mask: int) -> int:
        r = self._cache.get(mask)
        if r is None:
            r = vectors_rank([self.cols[j] for j in _members(mask, self.k)])
            self._cache[mask] = r
        return r

    def of(self, I) -> int:
        mask = 0
        for j in I:
            mask |= 1 << j
        return self(mask)


# --------------------------------------------------------------------------
# columns condition


def _column_sum(cols, members):
    return [sum(cols[j][i] for j in members) for i in range(len(cols[0]))]


def verify_certificate(A: IntMatrix, blocks: Sequence[Sequence[int]]) -> bool:
    k = A.cols
    seen: list[int] = []
    flat = [j for b in blocks for j in b]
    if sorted(flat) != list(range(k)) or any(not b for b in blocks):
        return False
    cols = A.columns()
    for b in blocks:
        s = _column_sum(cols, b)
        if not in_rational_span([cols[j] for j in seen], s):
            return False
        seen.extend(b)
    return True


def columns_condition(A: IntMatrix) -> list[list[int]] | None:
    """Search for an ordered partition C1, ..., Ct of the columns (0-based)
    satisfying Rado's columns condition; ``None`` proves there is none.

    Dynamic programming over the set of remaining columns: the span available
    to the next block depends only on which columns are already used.
    """
    k = A.cols
    cols = A.columns()
    full = (1 << k) - 1
    ranks = _ColumnRanks(A)
    rk = ranks(full)
    sums: dict[int, list[int]] = {}

    def colsum(mask):
        s = sums.get(mask)
        if s is None:
            s = _column_sum(cols, _members(mask, k))
            sums[mask] = s
        return s

    @lru_cache(maxsize=None)
    def solve(remaining: int):
        if remaining == 0:
            return ()
        used = full ^ remaining
        if used and ranks(used) == rk:
            return (remaining,)
        subs = []
        t = remaining
        while t:
            subs.append(t)
            t = (t - 1) & remaining
        subs.sort(key=lambda m: (_popcount(m), m))
        base = ranks(used)
        used_cols = [cols[j] for j in _members(used, k)]
        for T in subs:
            s = colsum(T)
            if any(s):
                if not used or vectors_rank(used_cols + [s]) != base:
                    continue
            rest = solve(remaining ^ T)
            if rest is not None:
                return (T,) + rest
        return None

    found = solve(full)
    if found is None:
        return None
    blocks = [_members(m, k) for m in found]
    assert verify_certificate(A, blocks)
    return blocks


# --------------------------------------------------------------------------
# irredundancy


def default_search_bound(A: IntMatrix) -> int:
    return 5 * A.cols * (1 + A.max_abs())


def check_irredundant(A: IntMatrix, search_bound: int | None = None):
    """Look for a solution in [search_bound]^k with pairwise distinct entries.

    Boxes [B]^k are tried for growing B; the witness is the lexicographically
    smallest solution in the first box that has one.  Returns
    ``(verdict, witness)``.
    """
    if search_bound is None:
        search_bound = default_search_bound(A)
    if search_bound < 1:
        raise InputError("search_bound must be positive")
    k = A.cols
    B = min(search_bound, max(k + 1, 4))
    while True:
        doms = [np.arange(1, B + 1)] * k
        best = None
        for chunk in iter_solutions(A, doms, distinct=True):
            cand = chunk[np.lexsort(chunk.T[::-1])][0]
            if best is None or tuple(cand) < best:
                best = tuple(int(v) for v in cand)
        if best is not None:
            return CONFIRMED, best
        if B >= search_bound:
            return REFUTED, None
        B = min(search_bound, 2 * B)


# --------------------------------------------------------------------------
# profiles


@dataclass
class RadoProfile:
    """A validated matrix together with everything the toolkit derives from it.

    ``matrix`` is the full-row-rank version (dependent rows dropped, which
    leaves the solution set unchanged); ``original`` is what was supplied.
    """

    matrix: IntMatrix
    name: str = ""
    original: IntMatrix | None = None
    dropped_rows: list[int] = field(default_factory=list)
    full_row_rank: bool = True
    partition_regular: bool = False
    certificate: list[list[int]] | None = None
    irredundant: str = UNKNOWN
    witness: tuple[int, ...] | None = None
    rank: int = 0
    m: Fraction | None = None
    m_argmax: tuple[int, ...] | None = None
    issues: list[str] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.matrix.cols

    @property
    def is_rado(self) -> bool:
        return self.partition_regular and self.irredundant == CONFIRMED and self.m is not None

    def exponent(self, I) -> int:
        """|I| - rk A + rk A_{complement of I}."""
        I = set(I)
        comp = [j for j in range(self.k) if j not in I]
        return len(I) - self.rank + self._ranks.of(comp)

    def rank_of(self, I) -> int:
        return self._ranks.of(I)

    def __post_init__(self):
        self._ranks = _ColumnRanks(self.matrix)

    def label(self) -> str:
        return self.name or "matrix"


def analyse(A: IntMatrix, name: str = "", search_bound: int | None = None) -> RadoProfile:
    """Build a :class:`RadoProfile`: row repair, columns condition,
    irredundancy and (when the premises hold) m(A)."""
    keep = independent_rows(A)
    dropped = [i for i in range(len(A.rows)) if i not in keep]
    if keep:
        M = IntMatrix(tuple(A.rows[i] for i in keep), A.cols)
    else:
        M = A
    prof = RadoProfile(matrix=M, name=name, original=A, dropped_rows=dropped,
                       full_row_rank=not dropped, rank=rank(M))
    if dropped:
        prof.issues.append("dropped dependent rows %s" % [i + 1 for i in dropped])
    cert = columns_condition(M)
    prof.partition_regular = cert is not None
    prof.certificate = cert
    if not prof.partition_regular:
        prof.issues.append("columns condition fails: not partition-regular")
    verdict, witness = check_irredundant(M, search_bound)
    prof.irredundant, prof.witness = verdict, witness
    if verdict != CONFIRMED:
        prof.issues.append("no distinct-entry solution found (%s)" % verdict)
    if prof.partition_regular and verdict == CONFIRMED and A.cols >= 2:
        try:
            prof.m, prof.m_argmax = _density(prof)
        except NotRadoError as exc:
            prof.issues.append(str(exc))
    return prof


def _require_rado(P: RadoProfile):
    if not P.partition_regular:
        raise NotRadoError("%s is not partition-regular" % P.label())
    if P.irredundant != CONFIRMED:
        raise NotRadoError("%s is not confirmed irredundant (%s)" % (P.label(), P.irredundant))
    if P.k < 2:
        raise NotRadoError("%s has fewer than two columns" % P.label())


def _subsets(k: int, min_size: int):
    for s in range(min_size, k + 1):
        yield from combinations(range(k), s)


def _density(P: RadoProfile):
    k = P.k
    best, arg = None, None
    for W in _subsets(k, 2):
        comp = [j for j in range(k) if j not in W]
        den = len(W) - 1 + P.rank_of(comp) - P.rank
        if den <= 0:
            raise NotRadoError("m-density denominator %d <= 0 at W=%s for %s"
                               % (den, [j + 1 for j in W], P.label()))
        val = Fraction(len(W) - 1, den)
        if best is None or val > best:
            best, arg = val, W
    return best, arg


def m_density(P: RadoProfile) -> tuple[Fraction, tuple[int, ...]]:
    """m(A) = max over |W| >= 2 of (|W|-1)/(|W|-1+rk A_{W^c}-rk A), with a maximiser."""
    _require_rado(P)
    if P.m is None:
        P.m, P.m_argmax = _density(P)
    return P.m, P.m_argmax


def m_asym(A: RadoProfile, B: RadoProfile) -> tuple[Fraction, tuple[int, ...]]:
    """m(A,B) = max over |W| >= 2 of |W|/(|W|-rk A+rk A_{W^c}-1+1/m(B)), with a maximiser."""
    mA, _ = m_density(A)
    mB, _ = m_density(B)
    if mA < mB:
        raise OrderingError("m(%s)=%s < m(%s)=%s; swap the arguments so that m(A) >= m(B)"
                            % (A.label(), mA, B.label(), mB))
    inv = 1 / mB
    best, arg = None, None
    for W in _subsets(A.k, 2):
        comp = [j for j in range(A.k) if j not in W]
        den = len(W) - A.rank + A.rank_of(comp) - 1 + inv
        if den <= 0:
            raise NotRadoError("m(A,B) denominator %s <= 0 at W=%s" % (den, [j + 1 for j in W]))
        val = Fraction(len(W)) / den
        if best is None or val > best:
            best, arg = val, W
    return best, arg


def block_diagonal(mats: Sequence[IntMatrix]) -> IntMatrix:
    k = sum(M.cols for M in mats)
    rows = []
    off = 0
    for M in mats:
        for r in M.rows:
            rows.append((0,) * off + tuple(r) + (0,) * (k - off - M.cols))
        off += M.cols
    return IntMatrix(tuple(rows), k)


def diag_block(profiles: Sequence[RadoProfile], name: str = "") -> RadoProfile:
    """Profile of diag(A_1, ..., A_r); its certificate is the blockwise
    concatenation of the inputs' certificates."""
    if not profiles:
        raise InputError("need at least one profile")
    if len(profiles) == 1:
        return profiles[0]
    for P in profiles:
        if not P.partition_regular:
            raise NotRadoError("%s is not partition-regular" % P.label())
    M = block_diagonal([P.matrix for P in profiles])
    depth = max(len(P.certificate) for P in profiles)
    blocks: list[list[int]] = [[] for _ in range(depth)]
    off = 0
    for P in profiles:
        for t, b in enumerate(P.certificate):
            blocks[t].extend(j + off for j in b)
        off += P.k
    blocks = [sorted(b) for b in blocks if b]
    if not verify_certificate(M, blocks):
        raise AssertionError("concatenated certificate failed to verify")
    prof = analyse(M, name=name or "diag(%s)" % ",".join(P.label() for P in profiles))
    prof.certificate = blocks
    return prof
