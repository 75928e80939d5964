"""Small exact integer linear algebra (fractions-based, tiny matrices)."""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalError


def solve_exact(columns, target):
    """Solve sum_j v_j * columns[j] = target over the rationals.

    Returns the coefficient list (Fractions) or None when inconsistent.
    Columns must be linearly independent.
    """
    m = len(target)
    n = len(columns)
    a = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])]
         for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        p = next((r for r in range(row, m) if a[r][col]), None)
        if p is None:
            raise InternalError("dependent columns in solve_exact")
        a[row], a[p] = a[p], a[row]
        pv = a[row][col]
        a[row] = [x / pv for x in a[row]]
        for r in range(m):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][n]:
            return None
    sol = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        sol[col] = a[r][n]
    return sol


def solve_integer(columns, target):
    """Like solve_exact but demands an integer solution."""
    sol = solve_exact(columns, target)
    if sol is None:
        return None
    out = []
    for x in sol:
        if x.denominator != 1:
            return None
        out.append(int(x))
    return out


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum(r[j] * v[j] for j in range(len(v))) for r in a]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def mat_eq(a, b):
    return all(tuple(r) == tuple(s) for r, s in zip(a, b))


def det_pm1(a):
    """Determinant of a small integer matrix, exact."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        inv = m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    if det.denominator != 1:
        raise InternalError("non-integer determinant")
    return int(det)


def mat_inverse_unimodular(a):
    """Inverse of an integer matrix with determinant +-1."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0)
                                         for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c]), None)
        if p is None:
            raise InternalError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = aug[i][n + j]
            if x.denominator != 1:
                raise InternalError("matrix not unimodular")
            row.append(int(x))
        out.append(row)
    return out
