from fractions import Fraction

import mpmath
import numpy as np
import pytest

from oracles import janson_terms
from radothresh.catalogue import builtin_profile
from radothresh.errors import InputError
from radothresh.hypergraph import OrderedSolutionHypergraph, enumerate_solutions
from radothresh.rado import diag_block
from radothresh.threshold import (Cell, concentration_check, crossing_constant, janson_bound, order_by_density,
                                  sample_binomial, sample_weighted_partite, threshold_scan, wilson)
from radothresh.weights import WeightFunction, solve_weights

S = builtin_profile("schur")


def test_binomial_trivial():
    assert len(sample_binomial(100, 0, 1)) == 0
    assert sample_binomial(100, 1, 1).as_set() == set(range(1, 101))
    a, b = sample_binomial(1000, 0.3, 5), sample_binomial(1000, 0.3, 5)
    assert np.array_equal(a.included, b.included)
    assert not np.array_equal(a.included, sample_binomial(1000, 0.3, 6).included)
    with pytest.raises(InputError):
        sample_binomial(10, 1.5, 1)


def test_binomial_concentration():
    n = 10 ** 4
    ok = sum(abs(len(sample_binomial(n, 0.5, s)) - n / 2) <= 3 * (n / 4) ** 0.5 for s in range(1000))
    assert ok >= 990


def test_weighted_ones_equals_binomial():
    for k in (3, 4):
        a = sample_weighted_partite(500, 0.2, WeightFunction.ones(k), k, 9)
        b = sample_binomial(500, 0.2, 9)
        assert np.array_equal(a.included, b.included)


def test_coupling_subset():
    w = WeightFunction((Fraction(1), Fraction(2), Fraction(3, 2)))
    for seed in range(50):
        smp = sample_weighted_partite(300, 0.4, w, 3, seed)
        assert set(smp.included) <= set(smp.coupled)


def test_weighted_inclusion_rates():
    n = 10 ** 4
    A = diag_block([builtin_profile("ap4"), builtin_profile("ap3")], name="ap4+ap3")
    w = solve_weights(A, S)
    p = n ** -0.5
    smp = sample_weighted_partite(n, p, w, A.k, 3)
    inside = np.zeros(n + 1, dtype=bool)
    inside[smp.included] = True
    for i in range(A.k):
        members = np.nonzero(smp.parts == i)[0] + 1
        rate = p ** float(w(i))
        sigma = (rate * (1 - rate) / len(members)) ** 0.5
        assert abs(inside[members].mean() - rate) <= 3 * sigma


def test_concentration_q_one():
    rows = concentration_check(S, WeightFunction.ones(3), 1.0, 60, 3, 1)
    assert all(r.frequency == 1.0 for r in rows)


def test_concentration_counts_naive():
    n, q = 40, 0.8
    rows = concentration_check(S, WeightFunction.ones(3), q, n, 1, 4)
    smp = sample_weighted_partite(n, q, WeightFunction.ones(3), 3, 4, key=(n, 0))
    part = {int(x): int(smp.parts[x - 1]) for x in smp.included}
    sols = [(a, b, a + b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b and a + b <= n]
    for r in rows:
        exp = {tuple(x[i] for i in r.I) for x in sols if all(part.get(x[i]) == i for i in r.I)}
        assert r.mean == len(exp)


def test_concentration_empty_projection():
    with pytest.raises(InputError):
        concentration_check(S, WeightFunction.ones(3), 0.5, 2, 1, 1)


def test_janson_single_edge():
    H = OrderedSolutionHypergraph(S, 3, np.array([[1, 2, 3]]))
    q = Fraction(1, 2)
    rep = janson_bound(H, q, WeightFunction.ones(3))
    assert rep.Delta == 0 and rep.delta == 0
    mu = mpmath.mpf(1) / 8 / 27
    assert mpmath.almosteq(rep.mu, mu) and mpmath.almosteq(rep.bound, mpmath.exp(-mu / 2))


def test_janson_monotone_in_q():
    H = enumerate_solutions(S, 50)
    vals = [janson_bound(H, Fraction(j, 10), WeightFunction.ones(3)).bound for j in range(1, 11)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(InputError):
        janson_bound(OrderedSolutionHypergraph(S, 2, np.zeros((0, 3), dtype=np.int64)), Fraction(1, 2),
                     WeightFunction.ones(3))


def test_janson_vs_independent_nontrivial_weights():
    A = builtin_profile("ap3")
    H = enumerate_solutions(A, 30)
    w = WeightFunction((Fraction(1), Fraction(3, 2), Fraction(5, 4)))
    q = Fraction(2, 5)
    rep = janson_bound(H, q, w, digits=25)
    mu, Delta, delta = janson_terms(H.edges, q, w.weights, 25)
    f = rep.formatted()
    assert f["mu"] == mpmath.nstr(mu, 25)
    assert f["Delta"] == mpmath.nstr(Delta, 25)
    assert f["delta"] == mpmath.nstr(delta, 25)


def test_wilson():
    lo, hi = wilson(0, 10)
    assert lo == 0 and 0.25 < hi < 0.35
    lo, hi = wilson(10, 10)
    assert hi == 1 and 0.65 < lo < 0.75
    c = Cell(10, "1", 0.1, 10, 3, 2)
    assert c.interval[0] == wilson(3, 10)[0] and c.interval[1] == wilson(5, 10)[1]


def test_crossing_constant():
    cells = [Cell(64, "1", 0, 10, 0, 0), Cell(64, "2", 0, 10, 2, 0), Cell(64, "4", 0, 10, 8, 0)]
    c = crossing_constant(cells)
    assert 2 < c < 4
    assert abs(c - np.exp(np.log(2) + 0.5 * np.log(2))) < 1e-12
    assert crossing_constant(cells[:2]) is None


def test_order_by_density():
    mats, moved = order_by_density([builtin_profile("ap3"), builtin_profile("ap4")])
    assert moved and mats[0].label() == "ap4"


def test_scan_limits_and_notice():
    curve = threshold_scan([S, S], [12], ["1/100", "10"], 20, 1)
    low, high = curve.by_n(12)
    assert low.successes == 0
    assert high.p == 1.0 and high.capped and high.successes == 20
    assert any("capped" in note for note in curve.notices)


def test_scan_reproducible_and_worker_invariant():
    args = ([S, S], [32, 64], ["2", "3"], 12, 11)
    a = threshold_scan(*args).to_csv()
    b = threshold_scan(*args).to_csv()
    c = threshold_scan(*args, workers=3, chunk=5).to_csv()
    assert a == b == c
    assert a.splitlines()[0] == "n,C,p,trials,successes,unknown,ci_low,ci_high"


def test_scan_unknowns_recorded():
    curve = threshold_scan([S, S, S], [400], ["30"], 3, 2, budget=2)
    (cell,) = curve.cells
    assert cell.unknown + cell.successes == 3 and cell.unknown > 0
    assert cell.incomplete


def test_scan_monotone_per_trial():
    # common random numbers: a trial that succeeds at C succeeds at every larger C
    from radothresh.threshold import _run_trials
    n = 64
    ps = [c * n ** -0.5 for c in (1.5, 2.5, 3.5, 5)]
    outcomes = [_run_trials(([S, S], n, p, list(range(40)), 5, 10 ** 6)) for p in ps]
    for t in range(40):
        col = [o[t] == "ramsey" for o in outcomes]
        assert col == sorted(col)
