from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import CATALOGUE, asym_density, density
from radothresh.catalogue import BASIC, BUILTIN, builtin_profile, format_matrix, parse_catalogue, \
    parse_matrix, resolve
from radothresh.errors import InputError, NotRadoError, OrderingError
from radothresh.linalg import IntMatrix
from radothresh.rado import (CONFIRMED, REFUTED, analyse, check_irredundant, columns_condition, diag_block,
                             m_asym, m_density, verify_certificate)


def test_columns_condition_examples():
    for name in ("schur", "ap3", "ap4", "schur2", "schur_ap3"):
        A = BUILTIN[name]
        cert = columns_condition(A)
        assert cert is not None and verify_certificate(A, cert)
    assert columns_condition(IntMatrix.from_rows([[1, 1, 1]])) is None
    assert columns_condition(IntMatrix.from_rows([[1, 2, -4]])) is None
    assert columns_condition(IntMatrix.from_rows([[1, -1, 2, -2]])) is not None


def test_verify_rejects_bad_certificate():
    assert not verify_certificate(BUILTIN["schur"], [[0, 1, 2]])
    assert verify_certificate(BUILTIN["schur"], [[0, 2], [1]])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(BUILTIN)), st.data())
def test_columns_condition_permutation_invariant(name, data):
    A = BUILTIN[name]
    perm = data.draw(st.permutations(range(A.cols)))
    P = IntMatrix.from_rows([[r[j] for j in perm] for r in A.rows])
    assert (columns_condition(P) is None) == (columns_condition(A) is None)


def test_irredundant():
    v, wit = check_irredundant(BUILTIN["schur"])
    assert v == CONFIRMED and len(set(wit)) == 3
    # x1 - x2 = 0 forces equal entries
    v, wit = check_irredundant(IntMatrix.from_rows([[1, -1, 0]]))
    assert v == REFUTED and wit is None


def test_densities_against_oracle():
    for name, rows in CATALOGUE.items():
        assert m_density(builtin_profile(name))[0] == density(rows), name
    for a in BASIC:
        for b in BASIC:
            A, B = builtin_profile(a), builtin_profile(b)
            if A.m >= B.m:
                assert m_asym(A, B)[0] == asym_density(CATALOGUE[a], CATALOGUE[b])


def test_ordering_error():
    with pytest.raises(OrderingError):
        m_asym(builtin_profile("ap3"), builtin_profile("ap4"))


def test_analyse_drops_dependent_rows():
    P = analyse(IntMatrix.from_rows([[1, 1, -1], [2, 2, -2]]), name="dup")
    assert P.dropped_rows == [1] and P.is_rado and P.m == 2


def test_not_rado_density():
    P = analyse(IntMatrix.from_rows([[1, 1, 1]]))
    assert not P.is_rado and P.m is None
    with pytest.raises(NotRadoError):
        m_density(P)


def test_diag_block():
    P = diag_block([builtin_profile("schur"), builtin_profile("ap3")], name="sa")
    assert P.is_rado and P.rank == 2
    assert verify_certificate(P.matrix, P.certificate)


def test_parse_matrix_roundtrip(tmp_path):
    text = "# ap4\n2 4\n1 -2 1 0\n0 1 -2 1\n"
    M = parse_matrix(text)
    assert M == BUILTIN["ap4"]
    assert parse_matrix(format_matrix(M)) == M
    f = tmp_path / "m.txt"
    f.write_text(text)
    assert resolve(str(f)).m == 3


@pytest.mark.parametrize("text,line", [("1 3\n1 x -1\n", 2), ("1 3\n1 1\n", 2), ("1 3 4\n1 1 -1\n", 1)])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(InputError, match=":%d:" % line):
        parse_matrix(text, "f")


def test_parse_missing_rows():
    with pytest.raises(InputError, match="expected 2 rows"):
        parse_matrix("2 3\n1 1 -1\n", "f")


def test_parse_catalogue():
    cat = parse_catalogue("[s]\n1 3\n1 1 -1\n[a]\n1 3\n1 -2 1\n")
    assert cat["s"] == BUILTIN["schur"] and cat["a"] == BUILTIN["ap3"]


def test_resolve_unknown():
    with pytest.raises(InputError):
        resolve("no-such-matrix")


def test_structural_inequalities():
    for name in BUILTIN:
        P = builtin_profile(name)
        k, rk = P.k, P.rank
        assert P.m > 1
        for i in range(k):
            comp = [j for j in range(k) if j != i]
            assert rk - P.rank_of(comp) == 0
        for s in range(2, k + 1):
            for I in combinations(range(k), s):
                comp = [j for j in range(k) if j not in I]
                assert k - s - P.rank_of(comp) <= k - rk - 1 - Fraction(s - 1) / P.m
