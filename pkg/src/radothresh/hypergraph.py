"""Ordered solution hypergraphs: enumeration, projections, degrees,
tameness and the co-degree function."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GuardError, InputError
from .rado import RadoProfile
from .solutions import Parametrisation, all_solutions

DEFAULT_CAP = 10 ** 8


def nonempty_subsets(k: int):
    for s in range(1, k + 1):
        yield from combinations(range(k), s)


def _encode(arr: np.ndarray, base: int) -> np.ndarray:
    code = np.zeros(len(arr), dtype=np.int64)
    for c in range(arr.shape[1]):
        code = code * base + arr[:, c]
    return code


def _decode(code: np.ndarray, width: int, base: int) -> np.ndarray:
    out = np.empty((len(code), width), dtype=np.int64)
    code = code.copy()
    for c in reversed(range(width)):
        out[:, c] = code % base
        code //= base
    return out


@dataclass(frozen=True)
class Projection:
    """The I-projection: distinct restrictions (``keys``, sorted) and how many
    edges restrict to each (``counts``)."""

    I: tuple[int, ...]
    keys: np.ndarray
    counts: np.ndarray

    def __len__(self):
        return len(self.keys)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(v) for v in key): int(c) for key, c in zip(self.keys, self.counts)}

    def multiplicity(self, u) -> int:
        return self.as_dict().get(tuple(u), 0)


class OrderedSolutionHypergraph:
    """All solutions of A x = 0 over [n] with pairwise distinct entries,
    as lexicographically sorted k-tuples (rows of ``edges``)."""

    def __init__(self, profile: RadoProfile, n: int, edges: np.ndarray):
        self.profile = profile
        self.n = n
        self.k = profile.k
        self.edges = edges
        self._proj: dict[tuple[int, ...], Projection] = {}

    def __len__(self):
        return len(self.edges)

    @property
    def matrix(self):
        return self.profile.matrix

    def _check(self, I) -> tuple[int, ...]:
        I = tuple(sorted(set(I)))
        if not I:
            raise InputError("projection index set must be nonempty")
        if I[0] < 0 or I[-1] >= self.k:
            raise InputError("index set %s out of range for k=%d" % (I, self.k))
        return I

    def project(self, I) -> Projection:
        I = self._check(I)
        proj = self._proj.get(I)
        if proj is None:
            base = self.n + 1
            codes, counts = np.unique(_encode(self.edges[:, I], base), return_counts=True)
            proj = Projection(I, _decode(codes, len(I), base), counts)
            self._proj[I] = proj
        return proj

    def size(self, I) -> int:
        return len(self.project(I))

    def window_degrees(self, I, W) -> tuple[np.ndarray, np.ndarray]:
        """For each key u of the I-projection, the number of distinct
        W-projection keys restricting to u.  Returns (keys_I, degrees)."""
        I, W = self._check(I), self._check(W)
        if not set(I) <= set(W):
            raise InputError("window %s does not contain %s" % (W, I))
        pI = self.project(I)
        pW = self.project(W)
        pos = [W.index(i) for i in I]
        base = self.n + 1
        sub = _encode(pW.keys[:, pos], base)
        codes, deg = np.unique(sub, return_counts=True)
        keys = _encode(pI.keys, base)
        # every I-key extends to at least one W-key
        assert np.array_equal(codes, keys)
        return pI.keys, deg

    def degree_in_window(self, I, W, u) -> int:
        keys, deg = self.window_degrees(I, W)
        u = np.asarray(u, dtype=np.int64)
        hit = np.nonzero(np.all(keys == u, axis=1))[0]
        if len(hit) == 0:
            raise InputError("%s is not a key of the %s-projection" % (tuple(u.tolist()), tuple(I)))
        return int(deg[hit[0]])

    def unordered_edges(self) -> np.ndarray:
        """Edges as vertex sets (sorted rows), deduplicated."""
        if len(self.edges) == 0:
            return self.edges.copy()
        return np.unique(np.sort(self.edges, axis=1), axis=0)

    def write_edges(self, path) -> None:
        lines = "".join(" ".join(str(int(v)) for v in row) + "\n" for row in self.edges)
        Path(path).write_text(lines)


def read_edges(path) -> np.ndarray:
    rows = [[int(v) for v in line.split()] for line in Path(path).read_text().splitlines() if line.strip()]
    return np.array(rows, dtype=np.int64)


def enumerate_solutions(profile: RadoProfile, n: int, cap: int = DEFAULT_CAP) -> OrderedSolutionHypergraph:
    """The ordered solution hypergraph of ``profile.matrix`` over [n].

    Refuses with :class:`GuardError` when the n^(k - rk A) candidate
    pre-estimate exceeds ``cap``.
    """
    if n < 1:
        raise InputError("n must be positive")
    A = profile.matrix
    param = Parametrisation(A)
    doms = [np.arange(1, n + 1, dtype=np.int64)] * A.cols
    est = param.candidates(doms)
    if est > cap:
        raise GuardError("estimated %d candidate solutions for %s at n=%d exceeds cap %d"
                         % (est, profile.label(), n, cap), estimate=est)
    edges = all_solutions(A, doms, param=param)
    return OrderedSolutionHypergraph(profile, n, edges)


def tameness_constant(H: OrderedSolutionHypergraph) -> Fraction:
    """Least K with deg_{H_W}(u) <= K |H_W| / |H_I| for all nonempty I
    strictly inside W and all u in H_I."""
    if len(H) == 0:
        raise InputError("tameness undefined for an empty hypergraph")
    K = Fraction(0)
    k = H.k
    for W in nonempty_subsets(k):
        if len(W) < 2:
            continue
        sW = H.size(W)
        for s in range(1, len(W)):
            for I in combinations(W, s):
                _, deg = H.window_degrees(I, W)
                K = max(K, Fraction(int(deg.max()) * H.size(I), sW))
    return K


def cherry_holds(H: OrderedSolutionHypergraph, K: Fraction) -> bool:
    """sum_u deg_{H_W}(u)^2 <= K^2 |H_W|^2 / |H_I| for every nonempty I strictly inside W."""
    for W in nonempty_subsets(H.k):
        sW = H.size(W)
        for s in range(1, len(W)):
            for I in combinations(W, s):
                _, deg = H.window_degrees(I, W)
                lhs = int((deg.astype(object) ** 2).sum())
                if Fraction(lhs) > K * K * sW * sW / H.size(I):
                    return False
    return True


def degree_bound_ratios(H: OrderedSolutionHypergraph) -> dict:
    """max_u deg_{H_W}(u) / n^(|W\\I| - rk A_{I^c} + rk A_{W^c}) for every I inside W."""
    P = H.profile
    k = H.k
    out = {}
    for W in nonempty_subsets(k):
        Wc = [j for j in range(k) if j not in W]
        for s in range(1, len(W)):
            for I in combinations(W, s):
                Ic = [j for j in range(k) if j not in I]
                e = len(W) - len(I) - P.rank_of(Ic) + P.rank_of(Wc)
                _, deg = H.window_degrees(I, W)
                out[(I, W)] = (e, int(deg.max()) / float(H.n) ** e)
    return out


# --------------------------------------------------------------------------
# co-degree function


def codegree_function(edges, n: int, tau):
    """delta_j(H, tau) for j = 2..k and delta(H, tau) for an unordered
    k-uniform hypergraph on n vertices.

    ``edges`` is an (m, k) array or sequence of vertex tuples; repeated
    vertex sets are collapsed.  With ``tau`` a Fraction (or int) every
    result is an exact Fraction.  Returns ``(deltas, delta)`` where
    ``deltas[j]`` is delta_j.
    """
    E = np.unique(np.sort(np.asarray(edges, dtype=np.int64), axis=1), axis=0) if len(edges) else None
    if E is None or len(E) == 0:
        raise InputError("co-degree function undefined for a hypergraph with no edges")
    if not (0 < tau):
        raise InputError("tau must be positive")
    k = E.shape[1]
    m = len(E)
    nd = k * m  # n * average degree
    base = int(E.max()) + 1
    deltas = {}
    for j in range(2, k + 1):
        subsets = np.concatenate([E[:, list(c)] for c in combinations(range(k), j)])
        codes, inv, counts = np.unique(_encode(subsets, base), return_inverse=True, return_counts=True)
        per_row = counts[inv.ravel()]
        best = np.zeros(max(n, base) + 1, dtype=np.int64)
        for c in range(j):
            np.maximum.at(best, subsets[:, c], per_row)
        total = int(best.sum())
        deltas[j] = Fraction(total) / (tau ** (j - 1) * nd) if isinstance(tau, (int, Fraction)) \
            else total / (tau ** (j - 1) * nd)
    delta = sum(Fraction(2) ** (comb(k, 2) - 1 - comb(j - 1, 2)) * deltas[j] for j in deltas)
    return deltas, delta


# --------------------------------------------------------------------------
# projection-count audit


@dataclass
class SlopeRow:
    I: tuple[int, ...]
    exponent: float
    slope: float
    counts: list[int]

    @property
    def deviation(self) -> float:
        return self.slope - self.exponent


def check_grid(grid: Sequence[int]) -> list[int]:
    grid = sorted(set(int(n) for n in grid))
    if len(grid) < 3 or grid[-1] < 4 * grid[0] or grid[0] < 1:
        raise InputError("n-grid needs >= 3 positive points spanning a factor of 4, got %s" % grid)
    return grid


def log_slope(grid, values) -> float:
    x = np.log(np.asarray(grid, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def projection_count_audit(profile: RadoProfile, grid: Sequence[int], cap: int = DEFAULT_CAP,
                           hypergraphs: dict | None = None) -> list[SlopeRow]:
    """Fit log |H_I| against log n for every nonempty I and compare with
    |I| - rk A + rk A_{I^c}."""
    grid = check_grid(grid)
    hs = hypergraphs if hypergraphs is not None else {}
    for n in grid:
        if n not in hs:
            hs[n] = enumerate_solutions(profile, n, cap)
    rows = []
    for I in nonempty_subsets(profile.k):
        counts = [hs[n].size(I) for n in grid]
        if min(counts) == 0:
            raise InputError("empty projection %s on the grid" % (I,))
        rows.append(SlopeRow(I, profile.exponent(I), log_slope(grid, counts), counts))
    return rows
