"""Dense two-phase simplex over Fractions with Bland's rule.

Solves  max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0  exactly.
Sized for the weight problem (tens of variables, ~1000 rows).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(T, basis, r, c):
    prow = T[r]
    p = prow[c]
    if p != 1:
        prow = [v / p for v in prow]
        T[r] = prow
    nz = [j for j, v in enumerate(prow) if v != 0]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f != 0:
                for j in nz:
                    row[j] -= f * prow[j]
    basis[r] = c


def _run(T, basis, obj_row, ncols):
    """Maximise the objective stored (negated) in T[obj_row]; Bland's rule."""
    m = obj_row
    while True:
        z = T[obj_row]
        c = next((j for j in range(ncols) if z[j] < 0), None)
        if c is None:
            return
        best = None
        for i in range(m):
            a = T[i][c]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Unbounded()
        _pivot(T, basis, best[1], c)


def linprog_max(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()):
    """Return ``(optimum, x)`` with exact Fractions."""
    n = len(c)
    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), "ub"))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), "eq"))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2] == "ub")
    # columns: x (n) | slacks | artificials (m) | rhs
    width = n + n_slack + m
    T = []
    basis = []
    s = 0
    for i, (a, b, kind) in enumerate(rows):
        sign = -1 if b < 0 else 1
        row = [sign * v for v in a] + [Fraction(0)] * (n_slack + m) + [sign * b]
        if kind == "ub":
            row[n + s] = Fraction(sign)
            s += 1
        row[n + n_slack + i] = Fraction(1)
        T.append(row)
        basis.append(n + n_slack + i)
    # phase 1: minimise sum of artificials == maximise -sum
    z = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            z[j] -= T[i][j]
    for i in range(m):
        z[n + n_slack + i] += 1
    T.append(z)
    _run(T, basis, m, n + n_slack)
    if T[m][-1] != 0:
        raise Infeasible()
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    T.pop()
    keep = [i for i in range(m) if basis[i] < n + n_slack]
    T = [T[i][:n + n_slack] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)
    z = [Fraction(0)] * (n + n_slack + 1)
    for j in range(n):
        z[j] = -Fraction(c[j])
    for i in range(m):
        f = z[basis[i]]
        if f != 0:
            z = [a - f * b for a, b in zip(z, T[i])]
    T.append(z)
    _run(T, basis, m, n + n_slack)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return T[m][-1], x


def lexmin_optimum(c, A_ub, b_ub):
    """Maximise c.x, then among optimal points take the lexicographically
    smallest x by minimising x_0, x_1, ... in turn."""
    opt, x = linprog_max(c, A_ub, b_ub)
    A_eq = [list(c)]
    b_eq = [opt]
    n = len(c)
    for j in range(n):
        e = [0] * n
        e[j] = -1
        val, x = linprog_max(e, A_ub, b_ub, A_eq, b_eq)
        unit = [0] * n
        unit[j] = 1
        A_eq.append(unit)
        b_eq.append(-val)
    return opt, x
