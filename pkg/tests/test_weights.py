from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radothresh.catalogue import BASIC, builtin_profile
from radothresh.errors import InputError
from radothresh.hypergraph import nonempty_subsets
from radothresh.rado import diag_block
from radothresh.simplex import Infeasible, Unbounded, lexmin_optimum, linprog_max
from radothresh.weights import WeightFunction, boundedness_audit, minimiser_sets, r_x, solve_weights


def test_simplex_basic():
    opt, x = linprog_max([3, 2], [[1, 1], [1, 3]], [4, 6])
    assert opt == 12 and x == [4, 0]
    opt, x = linprog_max([1, 1], [[1, 0]], [2], [[1, -1]], [0])
    assert opt == 4 and x == [2, 2]
    with pytest.raises(Infeasible):
        linprog_max([1], [[1]], [-1])
    with pytest.raises(Unbounded):
        linprog_max([1, 0], [[0, 1]], [1])


def test_lexmin():
    opt, x = lexmin_optimum([1, 1], [[1, 1]], [2])
    assert opt == 2 and x == [0, 2]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(1, 10), min_size=5, max_size=5),
       st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_simplex_matches_scipy(A, b, c):
    scipy = pytest.importorskip("scipy.optimize")
    A = A + [[1, 1, 1]]
    b = b[:len(A)]
    res = scipy.linprog([-v for v in c], A_ub=A, b_ub=b, bounds=[(0, None)] * 3, method="highs")
    opt, x = linprog_max(c, A, b)
    assert abs(float(opt) + res.fun) < 1e-7
    assert all(sum(Fraction(a) * xi for a, xi in zip(row, x)) <= bi for row, bi in zip(A, b))


def test_weight_function():
    w = WeightFunction((Fraction(1), Fraction(4, 3)))
    assert w([0, 1]) == Fraction(7, 3) and w(1) == Fraction(4, 3)
    assert WeightFunction.from_json(w.to_json()) == w
    with pytest.raises(InputError):
        WeightFunction((Fraction(1, 2),))


def pairs():
    for a in BASIC:
        for b in BASIC:
            A, B = builtin_profile(a), builtin_profile(b)
            if A.m >= B.m:
                yield A, B


def test_ones_feasible_and_solver():
    for A, B in pairs():
        ones = WeightFunction.ones(A.k)
        assert all(r_x(ones, x, A, B) >= 0 for x in range(A.k))
        w = solve_weights(A, B)
        assert all(v >= 1 for v in w.weights)
        assert all(r_x(w, x, A, B) == 0 for x in range(A.k))


def test_r_x_examples():
    S, A3, A4 = (builtin_profile(n) for n in ("schur", "ap3", "ap4"))
    assert all(r_x(WeightFunction.ones(3), x, S, S) == 0 for x in range(3))
    assert all(r_x(WeightFunction.ones(4), x, A4, A3) == 0 for x in range(4))
    sets, proper = minimiser_sets(WeightFunction.ones(3), S, S)
    assert {(0,), (1,), (2,), (0, 1, 2)} <= set(sets) and proper
    sets, proper = minimiser_sets(WeightFunction.ones(4), A4, A3)
    assert (0, 1, 2, 3) in sets and proper


def test_nontrivial_weights():
    A = diag_block([builtin_profile("ap4"), builtin_profile("ap3")], name="ap4+ap3")
    w = solve_weights(A, builtin_profile("schur"))
    assert w.weights == (1, 1, 1, 1, Fraction(4, 3), Fraction(4, 3), Fraction(4, 3))
    B = diag_block([builtin_profile("ap5"), builtin_profile("ap3")], name="ap5+ap3")
    w = solve_weights(B, builtin_profile("ap4"))
    assert w.weights == (1,) * 5 + (Fraction(5, 4),) * 3
    for W, A2 in ((w, builtin_profile("ap4")),):
        assert all(r_x(W, x, B, A2) == 0 for x in range(B.k))


def test_boundedness_small():
    S = builtin_profile("schur")
    rep = boundedness_audit(S, S, WeightFunction.ones(3), [100, 200, 400, 800])
    assert rep.target == Fraction(1, 2)
    assert abs(rep.deviation) < 0.1
