"""Weight functions w : [k1] -> [1, oo) balancing the two densities.

For a pair (A1, A2) with m(A1) >= m(A2) write e(I) = |I| - rk A1 + rk (A1)_{I^c}.
The target is an additive w with

    min { e(I) - w(I)/m(A1,A2) : x in I }  =  1 - 1/m(A2)   for every x,

i.e. r_x(w) = 0.  The feasible region {w >= 1 : r_x(w) >= 0 for all x} is
a polytope containing w = 1; any maximiser of sum w lies on the target set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .hypergraph import DEFAULT_CAP, check_grid, enumerate_solutions, log_slope, nonempty_subsets
from .rado import RadoProfile, m_asym, m_density
from .simplex import Infeasible, lexmin_optimum


@dataclass(frozen=True)
class WeightFunction:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        for v in self.weights:
            if v < 1:
                raise InputError("weights must be >= 1, got %s" % v)

    @classmethod
    def ones(cls, k: int) -> "WeightFunction":
        return cls((Fraction(1),) * k)

    @property
    def k(self) -> int:
        return len(self.weights)

    def __call__(self, I) -> Fraction:
        if isinstance(I, int):
            return self.weights[I]
        return sum((self.weights[i] for i in I), Fraction(0))

    def to_json(self) -> str:
        """1-based keys, exact "num/den" values."""
        doc = {str(i + 1): "%d/%d" % (v.numerator, v.denominator) for i, v in enumerate(self.weights)}
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "WeightFunction":
        doc = json.loads(text)
        k = len(doc)
        try:
            return cls(tuple(Fraction(doc[str(i + 1)]) for i in range(k)))
        except KeyError as exc:
            raise InputError("weight document missing key %s" % exc) from None


def exponent_table(A: RadoProfile) -> dict[tuple[int, ...], int]:
    return {I: A.exponent(I) for I in nonempty_subsets(A.k)}


def _targets(A1: RadoProfile, A2: RadoProfile):
    m12, _ = m_asym(A1, A2)
    m2, _ = m_density(A2)
    return m12, 1 - 1 / m2


def r_x(w: WeightFunction, x: int, A1: RadoProfile, A2: RadoProfile) -> Fraction:
    m12, target = _targets(A1, A2)
    return min(A1.exponent(I) - w(I) / m12 for I in nonempty_subsets(A1.k) if x in I) - target


def solve_weights(A1: RadoProfile, A2: RadoProfile) -> WeightFunction:
    """Maximise sum w subject to e(I) - w(I)/m(A1,A2) >= 1 - 1/m(A2) for all
    nonempty I and w >= 1; the lexicographically smallest optimum is returned.

    Works in v = w - 1 >= 0, where v = 0 is feasible.
    """
    m12, target = _targets(A1, A2)
    k = A1.k
    A_ub, b_ub = [], []
    for I in nonempty_subsets(k):
        A_ub.append([1 if i in I else 0 for i in range(k)])
        b_ub.append(m12 * (A1.exponent(I) - target) - len(I))
    try:
        _, v = lexmin_optimum([1] * k, A_ub, b_ub)
    except Infeasible:
        raise AssertionError("weight LP infeasible although w = 1 should be feasible; "
                             "density computation is inconsistent") from None
    w = WeightFunction(tuple(1 + vi for vi in v))
    bad = [x for x in range(k) if r_x(w, x, A1, A2) != 0]
    if bad:
        raise AssertionError("solver output has r_x != 0 at %s" % bad)
    return w


def minimiser_sets(w: WeightFunction, A1: RadoProfile, A2: RadoProfile):
    """Sets I attaining min (e(I) - w(I)/m(A1,A2)), and whether every
    coordinate lies in one of them (properness)."""
    m12, _ = _targets(A1, A2)
    vals = {I: A1.exponent(I) - w(I) / m12 for I in nonempty_subsets(A1.k)}
    lo = min(vals.values())
    sets = [I for I, v in vals.items() if v == lo]
    covered = set().union(*map(set, sets))
    return sets, covered == set(range(A1.k))


@dataclass
class BoundednessReport:
    grid: list[int]
    minima: list[float]
    argmins: list[tuple[int, ...]]
    slope: float
    target: Fraction

    @property
    def deviation(self) -> float:
        return self.slope - float(self.target)


def boundedness_audit(A1: RadoProfile, A2: RadoProfile, w: WeightFunction, grid: Sequence[int],
                      cap: int = DEFAULT_CAP, hypergraphs: dict | None = None) -> BoundednessReport:
    """min_I p^{w(I)} |H_I| with p = n^{-1/m(A1,A2)}, per n, and its log-log slope
    against the target 1 - 1/m(A2).  ``argmins`` are the finite-n minimisers."""
    grid = check_grid(grid)
    m12, target = _targets(A1, A2)
    hs = hypergraphs if hypergraphs is not None else {}
    minima, argmins = [], []
    for n in grid:
        H = hs.get(n) or enumerate_solutions(A1, n, cap)
        hs[n] = H
        best = None
        for I in nonempty_subsets(A1.k):
            val = float(n) ** (-float(w(I)) / float(m12)) * H.size(I)
            if best is None or val < best[0]:
                best = (val, I)
        minima.append(best[0])
        argmins.append(best[1])
    return BoundednessReport(grid, minima, argmins, log_slope(grid, minima), target)
