"""Finite asymmetric Rado property X -> (A_1, ..., A_r).

Each distinct-entry solution of A_i inside X becomes a "not all colour i"
constraint on its support.  ``decide_arrow`` is a DPLL-style list-colouring
search over the elements of X in ascending order with unit propagation;
``supersaturation_scan`` and ``zeta_estimate`` run branch-and-bound over the
same constraint structure.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import GuardError, InputError
from .rado import RadoProfile
from .solutions import all_solutions

RAMSEY = "ramsey"
GOOD = "good-colouring"
EXHAUSTED = "budget-exhausted"

DEFAULT_BUDGET = 10 ** 9
MAX_SCAN_ELEMENTS = 40


def _ground(X) -> tuple[int, ...]:
    X = tuple(sorted(set(int(x) for x in X)))
    if X and X[0] < 1:
        raise InputError("ground set must consist of positive integers")
    return X


def ordered_solutions(A: RadoProfile, X) -> np.ndarray:
    X = _ground(X)
    if len(X) < A.k:
        return np.zeros((0, A.k), dtype=np.int64)
    dom = np.array(X, dtype=np.int64)
    return all_solutions(A.matrix, [dom] * A.k)


def supports(A: RadoProfile, X) -> Counter:
    """Distinct solution supports (sorted tuples) with their number of orderings."""
    sols = ordered_solutions(A, X)
    return Counter(tuple(int(v) for v in row) for row in np.sort(sols, axis=1))


def count_monochromatic(X, colouring: Mapping[int, int], A: RadoProfile, colour: int) -> int:
    """Ordered distinct-entry solutions of A with every entry in X and coloured ``colour``."""
    cls = [x for x in _ground(X) if colouring[x] == colour]
    return len(ordered_solutions(A, cls))


@dataclass
class RamseyInstance:
    X: tuple[int, ...]
    matrices: list[RadoProfile]

    def __post_init__(self):
        self.X = _ground(self.X)
        if not self.matrices:
            raise InputError("need at least one colour")

    @property
    def r(self) -> int:
        return len(self.matrices)

    @classmethod
    def interval(cls, n: int, matrices) -> "RamseyInstance":
        return cls(tuple(range(1, n + 1)), list(matrices))


def _symmetry_groups(keys: Sequence) -> list[int]:
    """prev[c] = the previous colour with an identical key, or -1."""
    prev = []
    for c, key in enumerate(keys):
        p = -1
        for d in range(c - 1, -1, -1):
            if keys[d] == key:
                p = d
                break
        prev.append(p)
    return prev


def _matrix_key(P: RadoProfile):
    return P.matrix.rows


@dataclass
class ArrowResult:
    verdict: str
    colouring: dict[int, int] | None
    nodes: int
    seconds: float
    constraints: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 6),
            "constraints": self.constraints,
            "colouring": None if self.colouring is None else {str(k): v for k, v in self.colouring.items()},
        }


class _Search:
    """Shared constraint tables for one instance."""

    def __init__(self, inst: RamseyInstance, with_mult: bool = False):
        self.inst = inst
        self.X = inst.X
        self.N = len(self.X)
        self.r = inst.r
        index = {x: i for i, x in enumerate(self.X)}
        self.cons_colour: list[int] = []
        self.cons_elems: list[tuple[int, ...]] = []
        self.cons_mult: list[int] = []
        seen = {}
        for c, A in enumerate(inst.matrices):
            key = _matrix_key(A)
            sup = seen.get(key)
            if sup is None:
                sup = supports(A, self.X)
                seen[key] = sup
            for s, mult in sup.items():
                self.cons_colour.append(c)
                self.cons_elems.append(tuple(index[x] for x in s))
                self.cons_mult.append(mult)
        self.by_elem: list[list[int]] = [[] for _ in range(self.N)]
        for ci, el in enumerate(self.cons_elems):
            for e in el:
                self.by_elem[e].append(ci)


def decide_arrow(inst: RamseyInstance, budget: int = DEFAULT_BUDGET) -> ArrowResult:
    """Decide X -> (A_1, ..., A_r): either every r-colouring has a colour-i
    solution of A_i for some i (``ramsey``), or a witness colouring with no
    such solution (``good-colouring``), or ``budget-exhausted``."""
    t0 = time.perf_counter()
    S = _Search(inst)
    N, r = S.N, S.r
    ncons = len(S.cons_elems)
    size = [len(e) for e in S.cons_elems]
    same = [0] * ncons      # elements coloured with the constraint's colour
    other = [0] * ncons     # elements coloured differently (constraint satisfied)
    colour = [-1] * N
    full = (1 << r) - 1
    domain = [full] * N
    used = [0] * r
    prev = _symmetry_groups([_matrix_key(A) for A in inst.matrices])
    trail: list[tuple] = []
    nodes = 0

    def assign(e, c, queue):
        colour[e] = c
        used[c] += 1
        trail.append(("a", e, c))
        ok = True
        for ci in S.by_elem[e]:
            if S.cons_colour[ci] == c:
                same[ci] += 1
                if other[ci] == 0:
                    if same[ci] == size[ci]:
                        ok = False
                    elif same[ci] == size[ci] - 1:
                        queue.append(ci)
            else:
                other[ci] += 1
        return ok

    def propagate(queue):
        while queue:
            ci = queue.pop()
            if other[ci] or same[ci] != size[ci] - 1:
                continue
            c = S.cons_colour[ci]
            last = next(e for e in S.cons_elems[ci] if colour[e] != c)
            if colour[last] != -1:
                continue
            bit = 1 << c
            if domain[last] & bit:
                domain[last] &= ~bit
                trail.append(("d", last, bit))
                d = domain[last]
                if d == 0:
                    return False
                if d & (d - 1) == 0:
                    if not assign(last, d.bit_length() - 1, queue):
                        return False
        return True

    def undo(mark):
        while len(trail) > mark:
            item = trail.pop()
            if item[0] == "a":
                _, e, c = item
                colour[e] = -1
                used[c] -= 1
                for ci in S.by_elem[e]:
                    if S.cons_colour[ci] == c:
                        same[ci] -= 1
                    else:
                        other[ci] -= 1
            else:
                _, e, bit = item
                domain[e] |= bit

    class Budget(Exception):
        pass

    def search(start):
        nonlocal nodes
        e = start
        while e < N and colour[e] != -1:
            e += 1
        if e == N:
            return True
        for c in range(r):
            if not domain[e] >> c & 1:
                continue
            p = prev[c]
            if p >= 0 and used[p] == 0:
                continue
            nodes += 1
            if nodes > budget:
                raise Budget()
            mark = len(trail)
            queue: list[int] = []
            if assign(e, c, queue) and propagate(queue) and search(e + 1):
                return True
            undo(mark)
        return False

    try:
        found = search(0)
    except Budget:
        return ArrowResult(EXHAUSTED, None, nodes, time.perf_counter() - t0, ncons)
    if not found:
        return ArrowResult(RAMSEY, None, nodes, time.perf_counter() - t0, ncons)
    witness = {x: colour[i] for i, x in enumerate(S.X)}
    for c, A in enumerate(inst.matrices):
        if count_monochromatic(S.X, witness, A, c):
            raise AssertionError("witness colouring failed re-verification in colour %d" % c)
    return ArrowResult(GOOD, witness, nodes, time.perf_counter() - t0, ncons)


# --------------------------------------------------------------------------
# min-max monochromatic counts


@dataclass
class ScanResult:
    value: Fraction
    exact: bool
    lower: Fraction
    upper: Fraction
    colouring: dict[int, int] | None
    nodes: int
    totals: list[int] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "exact" if self.exact else "bounded"


def _minmax(inst: RamseyInstance, scales: Sequence[Fraction], budget: int, max_elements: int) -> ScanResult:
    if len(inst.X) > max_elements:
        raise GuardError("ground set of %d elements exceeds the scan guard of %d"
                         % (len(inst.X), max_elements), estimate=len(inst.X))
    S = _Search(inst)
    N, r = S.N, S.r
    ncons = len(S.cons_elems)
    size = [len(e) for e in S.cons_elems]
    same = [0] * ncons
    counts = [0] * r
    colour = [-1] * N
    used = [0] * r
    prev = _symmetry_groups([(_matrix_key(A), scales[c]) for c, A in enumerate(inst.matrices)])

    def objective():
        return max(counts[c] * scales[c] for c in range(r))

    def place(e, c):
        colour[e] = c
        used[c] += 1
        for ci in S.by_elem[e]:
            if S.cons_colour[ci] == c:
                same[ci] += 1
                if same[ci] == size[ci]:
                    counts[c] += S.cons_mult[ci]

    def unplace(e):
        c = colour[e]
        for ci in S.by_elem[e]:
            if S.cons_colour[ci] == c:
                if same[ci] == size[ci]:
                    counts[c] -= S.cons_mult[ci]
                same[ci] -= 1
        used[c] -= 1
        colour[e] = -1

    # greedy start: each element takes the colour keeping the objective lowest
    for e in range(N):
        best_c, best_v = 0, None
        for c in range(r):
            place(e, c)
            v = objective()
            unplace(e)
            if best_v is None or v < best_v:
                best_c, best_v = c, v
        place(e, best_c)
    best = [objective(), list(colour)]
    for e in reversed(range(N)):
        unplace(e)
    nodes = 0
    exhausted = False

    def dfs(e):
        nonlocal nodes, exhausted
        if e == N:
            v = objective()
            if v < best[0]:
                best[0], best[1] = v, list(colour)
            return
        for c in range(r):
            p = prev[c]
            if p >= 0 and used[p] == 0:
                continue
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            place(e, c)
            if objective() < best[0]:
                dfs(e + 1)
            unplace(e)
            if exhausted or best[0] == 0:
                return

    if N and best[0] > 0:
        dfs(0)
    upper = Fraction(best[0])
    totals = [sum(m for ci, m in enumerate(S.cons_mult) if S.cons_colour[ci] == c) for c in range(r)]
    witness = {x: best[1][i] for i, x in enumerate(S.X)} if N else {}
    if not exhausted:
        return ScanResult(upper, True, upper, upper, witness, nodes, totals)
    lower = Fraction(0)
    if upper > 0:
        arrow = decide_arrow(inst, budget)
        if arrow.verdict == RAMSEY:
            lower = min(Fraction(min(m for ci, m in enumerate(S.cons_mult) if S.cons_colour[ci] == c)) * scales[c]
                        for c in range(r) if totals[c])
    return ScanResult(upper, False, lower, upper, witness, nodes, totals)


def supersaturation_scan(n: int, r: int, A: RadoProfile, budget: int = DEFAULT_BUDGET,
                         max_elements: int = MAX_SCAN_ELEMENTS) -> ScanResult:
    """min over r-colourings of [n] of the largest monochromatic
    (ordered) solution count."""
    if r < 1:
        raise InputError("r must be >= 1")
    inst = RamseyInstance.interval(n, [A] * r)
    return _minmax(inst, [Fraction(1)] * r, budget, max_elements)


def zeta_estimate(n: int, matrices: Sequence[RadoProfile], budget: int = DEFAULT_BUDGET,
                  max_elements: int = MAX_SCAN_ELEMENTS) -> ScanResult:
    """min over partitions U_1..U_r of [n] of max_i e(H_i[U_i]) / e(H_i)."""
    inst = RamseyInstance.interval(n, list(matrices))
    totals = [len(ordered_solutions(A, inst.X)) for A in inst.matrices]
    if any(t == 0 for t in totals):
        raise InputError("some solution hypergraph on [%d] has no edges" % n)
    return _minmax(inst, [Fraction(1, t) for t in totals], budget, max_elements)
