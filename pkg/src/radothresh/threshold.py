"""Random sets, concentration and Janson-type bounds, and threshold scans.

Randomness comes from counter-based Philox streams keyed by
(master seed, purpose, n, trial), so any trial can be regenerated in
isolation and results do not depend on how trials are spread over workers.
"""
from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import mpmath
import numpy as np

from .errors import InputError
from .hypergraph import (OrderedSolutionHypergraph, codegree_function, enumerate_solutions,
                         nonempty_subsets)
from .rado import RadoProfile, m_asym, m_density
from .ramsey import EXHAUSTED, RAMSEY, RamseyInstance, decide_arrow, zeta_estimate
from .solutions import projection_count, projection_is_injective, projection_keys
from .weights import WeightFunction

BINOMIAL, PARTITE = 0, 1


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Independent Philox stream for (seed, *keys)."""
    if seed is None:
        raise InputError("a seed is required")
    ss = np.random.SeedSequence([int(seed), *[int(k) for k in keys]])
    return np.random.Generator(np.random.Philox(ss))


def _uniforms(n, seed, *keys):
    return stream(seed, *keys).random(n)


@dataclass
class RandomSetSample:
    n: int
    p: float
    seed: int
    included: np.ndarray
    weights: WeightFunction | None = None
    parts: np.ndarray | None = None        # xi(x) - 1 for x = 1..n
    coupled: np.ndarray | None = None      # V_{n,p} drawn from the same uniforms

    def __len__(self):
        return len(self.included)

    def as_set(self) -> set[int]:
        return set(int(x) for x in self.included)


def _prob(p) -> float:
    p = float(p)
    if not 0 <= p <= 1:
        raise InputError("probability %s outside [0, 1]" % p)
    return p


def sample_binomial(n: int, p, seed: int, key: Sequence[int] = ()) -> RandomSetSample:
    """[n]_p: each x in [n] kept independently with probability p."""
    pf = _prob(p)
    u = _uniforms(n, seed, BINOMIAL, *key)
    return RandomSetSample(n, pf, seed, np.nonzero(u < pf)[0] + 1)


def sample_weighted_partite(n: int, p, w: WeightFunction, k: int, seed: int,
                            key: Sequence[int] = ()) -> RandomSetSample:
    """V_{n,p,w,k}: xi : [n] -> [k] uniform, x kept with probability p^{w(xi(x))}.

    The same uniforms also decide V_{n,p} (``coupled``); since p^w <= p the
    weighted set is always contained in it.  With w = 1 the result equals
    ``sample_binomial(n, p, seed)``.
    """
    pf = _prob(p)
    if pf == 0:
        raise InputError("weighted sampler needs p > 0")
    if w.k != k:
        raise InputError("weight function has %d coordinates, expected %d" % (w.k, k))
    rng = stream(seed, BINOMIAL, *key)
    u = rng.random(n)
    parts = rng.integers(0, k, size=n)
    probs = np.array([pf ** float(v) for v in w.weights])
    keep = u < probs[parts]
    return RandomSetSample(n, pf, seed, np.nonzero(keep)[0] + 1, w, parts, np.nonzero(u < pf)[0] + 1)


# --------------------------------------------------------------------------
# concentration of projected counts


@dataclass
class ConcentrationRow:
    I: tuple[int, ...]
    size: int                 # |H_I|
    threshold: float          # 2 q^{w(I)} |H_I|
    frequency: float          # fraction of trials with X_I <= threshold
    mean: float


def concentration_check(A1: RadoProfile, w: WeightFunction, q, n: int, trials: int, seed: int,
                        index_sets=None, warn=None) -> list[ConcentrationRow]:
    """Empirical frequency of X_I <= 2 q^{w(I)} |H_I| over V_{n,q,w} samples.

    X_I counts I-projected solution tuples u with u_i in the sample and
    xi(u_i) = i for every i in I.
    """
    k = A1.k
    qf = _prob(q)
    sets = [tuple(I) for I in (index_sets or nonempty_subsets(k))]
    full = [np.arange(1, n + 1, dtype=np.int64)] * k
    # non-injective projections are small: keep their keys and filter them
    # per sample; injective ones are recounted with restricted domains
    keys, sizes = {}, {}
    edges = None
    for I in sets:
        if projection_is_injective(A1.matrix, I):
            if edges is None:
                edges = projection_count(A1.matrix, full, range(k))
            sizes[I] = edges
        else:
            keys[I] = projection_keys(A1.matrix, full, I)
            sizes[I] = len(keys[I])
    for I, s in sizes.items():
        if s == 0:
            raise InputError("empty projection %s at n=%d" % (I, n))
        if warn is not None and qf ** float(w(I)) * s < 10:
            warn("q^w(I)|H_I| = %.3g for I=%s: far from the regime where concentration is expected"
                 % (qf ** float(w(I)) * s, I))
    hits = {I: 0 for I in sets}
    totals = {I: 0 for I in sets}
    for t in range(trials):
        smp = sample_weighted_partite(n, qf, w, k, seed, key=(n, t))
        inside = np.zeros(n + 1, dtype=bool)
        inside[smp.included] = True
        part = np.full(n + 1, -1)
        part[smp.included] = smp.parts[smp.included - 1]
        for I in sets:
            if I in keys:
                ok = np.ones(len(keys[I]), dtype=bool)
                for pos, j in enumerate(I):
                    ok &= part[keys[I][:, pos]] == j
                X = int(ok.sum())
            else:
                doms = [np.nonzero(part == j)[0].astype(np.int64) if j in I else full[j]
                        for j in range(k)]
                X = projection_count(A1.matrix, doms, I)
            totals[I] += X
            if X <= 2 * qf ** float(w(I)) * sizes[I]:
                hits[I] += 1
    return [ConcentrationRow(I, sizes[I], 2 * qf ** float(w(I)) * sizes[I], hits[I] / trials,
                             totals[I] / trials) for I in sets]


# --------------------------------------------------------------------------
# Suen / Janson bound


@dataclass
class PairStatistics:
    """Integer aggregates behind the Janson quantities, over ordered pairs
    of distinct edges (e, f) sharing at least one vertex.

    ``agree[I]`` counts such pairs whose coordinate agreement set
    {i : e_i = f_i} is exactly I (I may be empty); ``max_dependent`` is
    max_e |{f != e : f meets e}|.
    """

    edges: int
    k: int
    agree: dict[tuple[int, ...], int]
    max_dependent: int


def _dependent_counts(E: np.ndarray) -> np.ndarray:
    """|{f != e : f meets e}| for every edge e."""
    m, k = E.shape
    verts = E.ravel()
    eid = np.repeat(np.arange(m, dtype=np.int64), k)
    order = np.argsort(verts, kind="stable")
    verts, eid = verts[order], eid[order]
    starts = np.flatnonzero(np.r_[True, verts[1:] != verts[:-1]])
    ends = np.r_[starts[1:], len(verts)]
    groups = [eid[s:e] for s, e in zip(starts, ends)]
    pairs = np.concatenate([np.repeat(g, len(g)) * m + np.tile(g, len(g)) for g in groups])
    codes = np.unique(pairs)
    return np.bincount(codes // m, minlength=m) - 1


def pair_statistics(H: OrderedSolutionHypergraph) -> PairStatistics:
    """Agreement counts from projection degrees by inclusion-exclusion:
    sum_{u in H_I} deg(u)^2 counts ordered pairs agreeing at least on I."""
    if len(H) == 0:
        raise InputError("pair statistics undefined for an empty hypergraph")
    k, m = H.k, len(H)
    at_least = {(): m * m}
    for I in nonempty_subsets(k):
        at_least[I] = sum(int(c) * int(c) for c in H.project(I).counts)
    at_least = {I: v - m for I, v in at_least.items()}      # drop e = f
    agree = {}
    for J in nonempty_subsets(k):
        total = 0
        for I, v in at_least.items():
            if set(J) <= set(I):
                total += (-1) ** (len(I) - len(J)) * v
        if total:
            agree[J] = total
    dep = _dependent_counts(H.edges)
    meeting = int(dep.sum()) - sum(agree.values())
    if meeting:
        agree[()] = meeting
    return PairStatistics(m, k, agree, int(dep.max()))


@dataclass
class JansonReport:
    mu: mpmath.mpf
    Delta: mpmath.mpf
    delta: mpmath.mpf
    exponent: mpmath.mpf
    bound: mpmath.mpf
    stats: PairStatistics
    digits: int

    def formatted(self) -> dict[str, str]:
        return {name: mpmath.nstr(getattr(self, name), self.digits)
                for name in ("mu", "Delta", "delta", "exponent", "bound")}


def janson_bound(H: OrderedSolutionHypergraph, q, w: WeightFunction, digits: int = 30) -> JansonReport:
    """exp(-min(mu^2/(8 Delta), mu/2, mu/(6 delta))) with

        mu    = q^{w([k])} e(H) / k^k
        Delta = 1/2 sum_{e != f, e meets f} q^{2w([k]) - w(I(e, f))}
        delta = max_e sum_{f != e, f meets e} q^{w([k])}

    where I(e, f) is the set of coordinates on which e and f agree.  Terms
    with Delta = 0 or delta = 0 drop out of the minimum.  Values carry
    ``digits`` significant digits.
    """
    if len(H) == 0:
        raise InputError("Janson bound undefined for an empty hypergraph")
    k = H.k
    if w.k != k:
        raise InputError("weight function has %d coordinates, expected %d" % (w.k, k))
    st = pair_statistics(H)
    with mpmath.workdps(digits + 20):
        qm = mpmath.mpf(q.numerator) / q.denominator if isinstance(q, Fraction) else mpmath.mpf(q)
        if not 0 < qm <= 1:
            raise InputError("q must lie in (0, 1]")

        def power(x):
            x = Fraction(x)
            return qm ** (mpmath.mpf(x.numerator) / x.denominator)

        wk = w(range(k))
        qw = power(wk)
        mu = qw * st.edges / mpmath.mpf(k) ** k
        Delta = mpmath.fsum(c * power(2 * wk - w(I)) for I, c in sorted(st.agree.items())) / 2
        delta = qw * st.max_dependent
        terms = [mu / 2]
        if Delta > 0:
            terms.append(mu * mu / (8 * Delta))
        if delta > 0:
            terms.append(mu / (6 * delta))
        expo = min(terms)
        bound = mpmath.exp(-expo)
    with mpmath.workdps(digits):
        return JansonReport(+mu, +Delta, +delta, +expo, +bound, st, digits)


# --------------------------------------------------------------------------
# threshold scans


def wilson(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ph = successes / trials
    denom = 1 + z * z / trials
    centre = (ph + z * z / (2 * trials)) / denom
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


@dataclass
class Cell:
    n: int
    C: str
    p: float
    trials: int
    successes: int
    unknown: int
    capped: bool = False

    @property
    def interval(self) -> tuple[float, float]:
        """Wilson 95% band; unknown trials count as failures for the lower
        end and as successes for the upper end."""
        lo, _ = wilson(self.successes, self.trials)
        _, hi = wilson(self.successes + self.unknown, self.trials)
        return lo, hi

    @property
    def fraction(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def incomplete(self) -> bool:
        return self.unknown > 0


CSV_HEADER = "n,C,p,trials,successes,unknown,ci_low,ci_high"


@dataclass
class ThresholdCurve:
    names: list[str]
    density: Fraction
    cells: list[Cell]
    notices: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        out = [CSV_HEADER]
        for c in self.cells:
            lo, hi = c.interval
            # repr gives the shortest decimal that round-trips to the p actually used
            out.append("%d,%s,%r,%d,%d,%d,%.6f,%.6f" % (c.n, c.C, c.p, c.trials, c.successes,
                                                        c.unknown, lo, hi))
        return "\n".join(out) + "\n"

    def by_n(self, n: int) -> list[Cell]:
        return sorted((c for c in self.cells if c.n == n), key=lambda c: Fraction(c.C))


def crossing_constant(cells: Sequence[Cell], level: float = 0.5) -> float | None:
    """C where the success fraction first reaches ``level``, interpolating
    linearly in log C between grid points."""
    cells = sorted(cells, key=lambda c: Fraction(c.C))
    prev = None
    for c in cells:
        if c.fraction >= level:
            if prev is None:
                return float(Fraction(c.C))
            x0, x1 = math.log(float(Fraction(prev.C))), math.log(float(Fraction(c.C)))
            y0, y1 = prev.fraction, c.fraction
            t = (level - y0) / (y1 - y0) if y1 != y0 else 0.0
            return math.exp(x0 + t * (x1 - x0))
        prev = c
    return None


def order_by_density(matrices: Sequence[RadoProfile]) -> tuple[list[RadoProfile], bool]:
    dens = [m_density(A)[0] for A in matrices]
    order = sorted(range(len(matrices)), key=lambda i: -dens[i])
    return [matrices[i] for i in order], order != list(range(len(matrices)))


def threshold_density(matrices: Sequence[RadoProfile]) -> Fraction:
    if len(matrices) == 1:
        return m_density(matrices[0])[0]
    return m_asym(matrices[0], matrices[1])[0]


def _probability(C: Fraction, n: int, density: Fraction) -> tuple[float, bool]:
    p = float(C) * float(n) ** (-1 / float(density))
    return (1.0, True) if p > 1 else (p, False)


def _run_trials(task):
    matrices, n, p, trials, seed, budget = task
    out = []
    for t in trials:
        u = _uniforms(n, seed, BINOMIAL, n, t)
        X = np.nonzero(u < p)[0] + 1
        res = decide_arrow(RamseyInstance(tuple(int(x) for x in X), matrices), budget)
        out.append(res.verdict)
    return out


def threshold_scan(matrices: Sequence[RadoProfile], n_grid: Sequence[int], c_grid: Sequence,
                   trials: int, seed: int, budget: int = 10 ** 6, workers: int = 1,
                   chunk: int = 25) -> ThresholdCurve:
    """Estimate Pr[[n]_p -> (A_1, ..., A_r)] at p = C n^{-1/m(A_1, A_2)} on a grid.

    Trial t at size n uses the same uniforms for every C (common random
    numbers), so per-trial outcomes are monotone in C.
    """
    if not n_grid or not c_grid:
        raise InputError("n-grid and C-grid must be nonempty")
    if trials < 1:
        raise InputError("trials must be positive")
    mats, resorted = order_by_density(list(matrices))
    notices = []
    if resorted:
        notices.append("matrices reordered by decreasing density: %s" % ", ".join(A.label() for A in mats))
    density = threshold_density(mats)
    cs = [(str(c), Fraction(str(c))) for c in c_grid]
    for s, c in cs:
        if c <= 0:
            raise InputError("C values must be positive, got %s" % s)
    cells, tasks, index = [], [], []
    for n in n_grid:
        for s, c in cs:
            p, capped = _probability(c, n, density)
            if capped:
                notices.append("p capped at 1 for n=%d, C=%s" % (n, s))
            cells.append(Cell(n, s, p, trials, 0, 0, capped))
            for start in range(0, trials, chunk):
                tasks.append((mats, n, p, list(range(start, min(trials, start + chunk))), seed, budget))
                index.append(len(cells) - 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_trials, tasks))
    else:
        results = [_run_trials(t) for t in tasks]
    for ci, verdicts in zip(index, results):
        cells[ci].successes += sum(v == RAMSEY for v in verdicts)
        cells[ci].unknown += sum(v == EXHAUSTED for v in verdicts)
    for c in cells:
        if c.incomplete:
            notices.append("n=%d, C=%s: %d trials exhausted the oracle budget" % (c.n, c.C, c.unknown))
    return ThresholdCurve([A.label() for A in mats], density, cells, notices)


# --------------------------------------------------------------------------
# preflight of the asymptotic side conditions


def preflight(matrices: Sequence[RadoProfile], n: int, epsilon: float, cprime: float,
              zeta_n: int = 12, budget: int = 10 ** 6) -> list[dict]:
    """Evaluate delta(H_i, tau) <= eps/(12 k_i!) for i >= 2 with
    tau = C' n^{-1/m(A_2)}, and zeta > t! eps with a finite-n zeta proxy.
    These are asymptotic premises; failures are informational."""
    mats, _ = order_by_density(list(matrices))
    checks = []
    if len(mats) < 2:
        return checks
    m2 = m_density(mats[1])[0]
    tau = cprime * n ** (-1 / float(m2))
    for i, A in enumerate(mats[1:], start=2):
        item = {"check": "codegree", "matrix": A.label(), "colour": i, "n": n, "tau": tau}
        if not 0 < tau < 1:
            item.update(ok=False, note="tau outside (0,1)")
        else:
            try:
                H = enumerate_solutions(A, n, cap=10 ** 7)
                _, delta = codegree_function(H.unordered_edges(), n, Fraction(tau))
                limit = epsilon / (12 * factorial(A.k))
                item.update(delta=float(delta), limit=limit, ok=float(delta) <= limit)
            except Exception as exc:  # guard refusals, empty hypergraphs
                item.update(ok=False, note=str(exc))
        checks.append(item)
    t = max(A.k for A in mats[1:])
    zn = min(n, zeta_n)
    item = {"check": "zeta", "n": zn, "required": factorial(t) * epsilon}
    try:
        z = zeta_estimate(zn, mats, budget=budget)
        item.update(zeta=float(z.value), exact=z.exact, ok=float(z.value) > factorial(t) * epsilon)
    except Exception as exc:
        item.update(ok=False, note=str(exc))
    checks.append(item)
    return checks


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
