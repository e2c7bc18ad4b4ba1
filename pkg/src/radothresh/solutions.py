"""Vectorised enumeration of integer solutions of A x = 0 inside a box.

The solution space is parametrised by a column basis complement: the
"free" coordinates range over their domains, the "pinned" coordinates are
recovered exactly as x_P = (N x_F) / D and kept only when integral and
in range.  Work is therefore proportional to the number of free
assignments, n^(k - rk A) on [n]^k, rather than n^k.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm, prod
from typing import Iterator, Sequence

import numpy as np

from .linalg import IntMatrix, independent_rows, pivot_columns, solve_square

CHUNK = 1 << 20


class Parametrisation:
    def __init__(self, A: IntMatrix, prefer_pinned: Sequence[int] = ()):
        rows = independent_rows(A)
        self.A = A
        self.k = A.cols
        self.rows = [A.rows[i] for i in rows]
        sub = IntMatrix(tuple(self.rows), A.cols) if self.rows else A
        self.pinned = pivot_columns(sub, prefer_pinned) if self.rows else []
        self.free = [j for j in range(self.k) if j not in self.pinned]
        if self.pinned:
            S = [[r[j] for j in self.pinned] for r in self.rows]
            R = [[-r[j] for j in self.free] for r in self.rows]
            X = solve_square(S, R) if self.free else [[] for _ in self.pinned]
            den = lcm(*(Fraction(v).denominator for row in X for v in row)) if self.free else 1
            self.den = den
            self.num = np.array([[int(v * den) for v in row] for row in X], dtype=np.int64).reshape(
                len(self.pinned), len(self.free))
        else:
            self.den = 1
            self.num = np.zeros((0, len(self.free)), dtype=np.int64)

    def candidates(self, domains: Sequence[np.ndarray]) -> int:
        return prod(len(domains[j]) for j in self.free)


def _lookup(domain: np.ndarray) -> np.ndarray:
    top = int(domain.max()) if len(domain) else 0
    table = np.zeros(top + 2, dtype=bool)
    table[domain] = True
    return table


def iter_solutions(A: IntMatrix, domains: Sequence[np.ndarray], *, distinct: bool = True,
                   prefer_pinned: Sequence[int] = (), chunk: int = CHUNK,
                   param: Parametrisation | None = None) -> Iterator[np.ndarray]:
    """Yield (m, k) int64 arrays of solutions with x_j in ``domains[j]``.

    Chunks come out in lexicographic order of the free coordinates, but rows
    are not globally sorted; callers sort when they need to.
    """
    P = param or Parametrisation(A, prefer_pinned)
    k = P.k
    domains = [np.asarray(d, dtype=np.int64) for d in domains]
    if len(domains) != k:
        raise ValueError("need one domain per column")
    if any(len(d) == 0 for d in domains):
        return
    free_dom = [domains[j] for j in P.free]
    sizes = [len(d) for d in free_dom]
    total = prod(sizes)
    tables = {j: _lookup(domains[j]) for j in P.pinned}
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        x = np.empty((len(idx), k), dtype=np.int64)
        if P.free:
            parts = np.unravel_index(idx, sizes)
            for f, j in enumerate(P.free):
                x[:, j] = free_dom[f][parts[f]]
        ok = np.ones(len(idx), dtype=bool)
        if P.pinned:
            vals = x[:, P.free] @ P.num.T if P.free else np.zeros((len(idx), len(P.pinned)), dtype=np.int64)
            if P.den != 1:
                ok &= np.all(vals % P.den == 0, axis=1)
                vals = vals // P.den
            for c, j in enumerate(P.pinned):
                v = vals[:, c]
                table = tables[j]
                inside = (v >= 0) & (v < len(table))
                hit = np.zeros(len(v), dtype=bool)
                hit[inside] = table[v[inside]]
                ok &= hit
                x[:, j] = v
        if distinct:
            for a in range(k):
                for b in range(a + 1, k):
                    ok &= x[:, a] != x[:, b]
        if ok.any():
            yield x[ok]


def _projection_codes(A, domains, I, param):
    base = max(int(np.max(d)) for d in domains) + 1
    seen = []
    for c in iter_solutions(A, domains, param=param):
        code = np.zeros(len(c), dtype=np.int64)
        for j in I:
            code = code * base + c[:, j]
        seen.append(np.unique(code))
    codes = np.unique(np.concatenate(seen)) if seen else np.zeros(0, dtype=np.int64)
    return codes, base


def projection_keys(A: IntMatrix, domains: Sequence[np.ndarray], I: Sequence[int]) -> np.ndarray:
    """Distinct I-restrictions of distinct-entry solutions in the box, as a
    lexicographically sorted (m, |I|) array."""
    I = sorted(set(I))
    if not all(len(d) for d in domains):
        return np.zeros((0, len(I)), dtype=np.int64)
    param = Parametrisation(A, prefer_pinned=[j for j in range(A.cols) if j not in I])
    codes, base = _projection_codes(A, domains, I, param)
    out = np.empty((len(codes), len(I)), dtype=np.int64)
    for pos in reversed(range(len(I))):
        out[:, pos] = codes % base
        codes = codes // base
    return out


def projection_count(A: IntMatrix, domains: Sequence[np.ndarray], I: Sequence[int]) -> int:
    """Number of distinct I-restrictions of distinct-entry solutions in the box.

    Pinned coordinates are taken outside I where possible; when every free
    coordinate lies in I the restriction is injective and rows are counted
    directly, otherwise restrictions are deduplicated.
    """
    I = sorted(set(I))
    if not all(len(d) for d in domains):
        return 0
    param = Parametrisation(A, prefer_pinned=[j for j in range(A.cols) if j not in I])
    if set(param.free) <= set(I):
        return sum(len(c) for c in iter_solutions(A, domains, param=param))
    return len(_projection_codes(A, domains, I, param)[0])


def projection_is_injective(A: IntMatrix, I: Sequence[int]) -> bool:
    """Whether the I-restriction determines the whole solution."""
    I = sorted(set(I))
    param = Parametrisation(A, prefer_pinned=[j for j in range(A.cols) if j not in I])
    return set(param.free) <= set(I)


def all_solutions(A: IntMatrix, domains: Sequence[np.ndarray], *, distinct: bool = True,
                  param: Parametrisation | None = None) -> np.ndarray:
    """All solutions in the box, lexicographically sorted."""
    chunks = list(iter_solutions(A, domains, distinct=distinct, param=param))
    if not chunks:
        return np.zeros((0, A.cols), dtype=np.int64)
    x = np.concatenate(chunks)
    order = np.lexsort(x.T[::-1])
    return x[order]
