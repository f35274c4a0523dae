"""Small exact linear algebra over the rationals.

Matrices are lists of row lists of rationals.  Everything here is plain
Gaussian elimination with exact arithmetic; the systems in this package
are tiny (d x d Jacobians and dense interpolation systems of a few dozen
unknowns), so no fraction-free tricks are needed.
"""

from __future__ import annotations

from .rationals import Q, Rational, ZERO


class SingularMatrix(ArithmeticError):
    pass


def _copy(matrix):
    return [[Q(entry) for entry in row] for row in matrix]


def determinant(matrix) -> Rational:
    """Exact determinant by elimination with row swaps."""
    a = _copy(matrix)
    n = len(a)
    det = Q(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - factor * a[col][c]
    return det


def solve(matrix, rhs) -> list:
    """Solve A x = b exactly; raises SingularMatrix if A is not invertible."""
    n = len(matrix)
    a = _copy(matrix)
    b = [Q(entry) for entry in rhs]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - factor * a[col][c]
                b[r] = b[r] - factor * b[col]
    x = [ZERO] * n
    for row in range(n - 1, -1, -1):
        acc = b[row]
        for c in range(row + 1, n):
            acc = acc - a[row][c] * x[c]
        x[row] = acc / a[row][row]
    return x


def invert(matrix) -> list:
    """Exact matrix inverse; raises SingularMatrix when det = 0."""
    n = len(matrix)
    cols = []
    for j in range(n):
        e = [ZERO] * n
        e[j] = Q(1)
        cols.append(solve(matrix, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def mat_vec(matrix, vec) -> list:
    return [
        sum((row[j] * vec[j] for j in range(len(vec))), ZERO) for row in matrix
    ]
