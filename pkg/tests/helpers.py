"""Shared builders for the test suite: reference formulas and random inputs.

The reference constructions here are written directly from the known
closed forms (explicit factor products and determinants), independent of
the library's own computation paths, so agreement is a real cross-check.
"""

from deltagon.goncarov import TableGrid
from deltagon.linalg import determinant
from deltagon.mpoly import MPoly
from deltagon.multiindex import indices_up_to_weight
from deltagon.operators import Indicator, ShiftInvariantOp, validate_system
from deltagon.rationals import Q
from deltagon.series import SeriesSystem, TruncatedSeries


def classical_bivariate_reference(A, m, n):
    """Closed form for the two-variable derivative case on z_k = A k.

    bracket * (x - x_mn)^(m-1) (y - y_mn)^(n-1) for m, n >= 1; a zero index
    degenerates that slot to the bare variable.
    """
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)

    def node(i, j):
        return (A[0][0] * i + A[0][1] * j, A[1][0] * i + A[1][1] * j)

    x_mn = MPoly.constant(2, node(m, n)[0])
    y_mn = MPoly.constant(2, node(m, n)[1])
    if m == 0 and n == 0:
        return MPoly.one(2)
    if n == 0:
        return x * (x - x_mn) ** (m - 1)
    if m == 0:
        return y * (y - y_mn) ** (n - 1)
    x_0n = MPoly.constant(2, node(0, n)[0])
    y_m0 = MPoly.constant(2, node(m, 0)[1])
    bracket = (x - x_0n) * (y - y_m0) - x_0n * y_m0
    return bracket * (x - x_mn) ** (m - 1) * (y - y_mn) ** (n - 1)


def difference_bivariate_reference(A, m, n, kind):
    """The factorial closed forms for the difference operators on z_k = A k.

    kind "forward": bracket times falling factorials starting one below the
    shifted variable; "backward": rising factorials one above.
    """
    x = MPoly.variable(2, 0)
    y = MPoly.variable(2, 1)

    def node(i, j):
        return (A[0][0] * i + A[0][1] * j, A[1][0] * i + A[1][1] * j)

    def tail(var, shift, count):
        # product over j = 1..count of (var - shift - j), sign of j per kind
        out = MPoly.one(2)
        for j in range(1, count + 1):
            offset = shift + j if kind == "forward" else shift - j
            out = out * (var - MPoly.constant(2, offset))
        return out

    x_mn, y_mn = node(m, n)
    if m == 0 and n == 0:
        return MPoly.one(2)
    if n == 0:
        return x * tail(x, x_mn, m - 1)
    if m == 0:
        return y * tail(y, y_mn, n - 1)
    x_0n = MPoly.constant(2, node(0, n)[0])
    y_m0 = MPoly.constant(2, node(m, 0)[1])
    bracket = (x - x_0n) * (y - y_m0) - x_0n * y_m0
    return bracket * tail(x, x_mn, m - 1) * tail(y, y_mn, n - 1)


def classical_trivariate_reference(A, m, n, p):
    """The printed 3x3 determinant formula; valid for m, n, p >= 1."""
    x = MPoly.variable(3, 0)
    y = MPoly.variable(3, 1)
    z = MPoly.variable(3, 2)

    def coord(c, i, j, k):
        return A[c][0] * i + A[c][1] * j + A[c][2] * k

    def const(value):
        return MPoly.constant(3, value)

    rows = [
        [x - const(coord(0, 0, n, p)), const(coord(1, m, 0, 0)), const(coord(2, m, 0, 0))],
        [const(coord(0, 0, n, 0)), y - const(coord(1, m, 0, p)), const(coord(2, 0, n, 0))],
        [const(coord(0, 0, 0, p)), const(coord(1, 0, 0, p)), z - const(coord(2, m, n, 0))],
    ]
    det = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    tail = MPoly.one(3)
    for axis, idx_val, var in ((0, m, x), (1, n, y), (2, p, z)):
        shifted = var - MPoly.constant(3, coord(axis, m, n, p))
        tail = tail * shifted ** (idx_val - 1)
    return det * tail


def random_table_grid(rng, dim, maxdeg, span=6):
    nodes = {
        idx: tuple(Q(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(dim))
        for idx in indices_up_to_weight(dim, maxdeg)
    }
    return TableGrid(dim, nodes)


def random_admissible_series_system(rng, dim, order, extra_terms=6):
    """Random admissible system: invertible integer linear part, sparse tail."""
    while True:
        jac = [[Q(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim)]
        if determinant(jac):
            break
    comps = []
    for i in range(dim):
        terms = {}
        for j in range(dim):
            if jac[i][j]:
                exp = [0] * dim
                exp[j] = 1
                terms[tuple(exp)] = jac[i][j]
        for _ in range(extra_terms):
            exp = tuple(rng.randint(0, order) for _ in range(dim))
            if 2 <= sum(exp) <= order:
                terms[exp] = Q(rng.randint(-3, 3), rng.randint(1, 3))
        comps.append(TruncatedSeries(dim, order, terms))
    return SeriesSystem(comps)


def sum_difference_system():
    """The admissible, non-strict pair with indicators x+y and x-y."""
    f1 = Indicator.from_poly_terms(2, {(1, 0): 1, (0, 1): 1}, name="Dx+Dy")
    f2 = Indicator.from_poly_terms(2, {(1, 0): 1, (0, 1): -1}, name="Dx-Dy")
    return validate_system([ShiftInvariantOp(f1), ShiftInvariantOp(f2)])
