"""Closed formulas for interpolation polynomials on linear grids.

When the grid is the image of the lattice under a d x d matrix A (nodes
z_k = A k), the interpolation polynomials of a separable system collapse
to closed form.  Two routes are implemented and cross-checked against the
general recurrence:

  * the determinant of a scalar matrix B + C (B diagonal with entries
    x_i - z_{n,i}, C with entry (i,j) equal to n_i a_{j,i}) times the
    product of the exact quotients p_{n_i}(x_i - z_{n,i}) / (x_i - z_{n,i});
  * a pure operator route: the determinant of an operator matrix F + G
    (F diagonal with the Pincherle derivative of each d_i along its own
    axis, G with entry (i,j) equal to a_{j,i} d_i), expanded as a signed
    permutation sum and applied to a shifted monomial through the inverse
    powers of the separable factors.

For axes with n_i = 0 the quotient route divides det(B + C) by the linear
factor x_i - z_{n,i}; that row of B + C is zero off the diagonal, so the
division is always exact and a NonExactDivision here means a bug, not bad
input.  Affine grids z_k = v + A k reduce to the linear case by
translation invariance.  Either orientation of C (and G) gives the same
determinant since B (and F) is diagonal; the one fixed here is pinned by
the bivariate specialization tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from . import multiindex as mi
from .errors import DimensionMismatch
from .goncarov import GoncarovTable, InterpolationGrid
from .mpoly import MPoly
from .operators import DeltaSystem, SeparableSystem, ShiftInvariantOp, shift_op, validate_system
from .rationals import Q, ZERO
from .sequences import BasicSequence, binomial_identity_check


class LinearGrid(InterpolationGrid):
    """Nodes z_k = A k, viewing the index as a column vector."""

    def __init__(self, matrix: Sequence[Sequence]):
        rows = tuple(tuple(Q(c) for c in row) for row in matrix)
        dim = len(rows)
        if any(len(row) != dim for row in rows):
            raise DimensionMismatch("grid matrix must be square")
        self.dim = dim
        self.matrix = rows

    def node(self, idx) -> tuple:
        idx = mi.check_index(idx, self.dim)
        return tuple(
            sum((row[j] * idx[j] for j in range(self.dim)), ZERO)
            for row in self.matrix
        )

    def column(self, i) -> tuple:
        """The i-th column: the node step when index i grows by one."""
        return tuple(row[i] for row in self.matrix)


class AffineGrid(InterpolationGrid):
    """Nodes z_k = v + A k; handled by reduction to the linear part."""

    def __init__(self, offset: Sequence, matrix: Sequence[Sequence]):
        self.linear = LinearGrid(matrix)
        self.dim = self.linear.dim
        offset = tuple(Q(c) for c in offset)
        if len(offset) != self.dim:
            raise DimensionMismatch("offset length must match the matrix")
        self.offset = offset

    def node(self, idx) -> tuple:
        base = self.linear.node(idx)
        return tuple(a + b for a, b in zip(self.offset, base))


def _poly_det(entries) -> MPoly:
    """Determinant of a small matrix of polynomials, by permutation sum."""
    d = len(entries)
    dim = entries[0][0].dim
    out = MPoly.zero(dim)
    for perm in permutations(range(d)):
        sign = _parity(perm)
        prod = MPoly.one(dim)
        for i in range(d):
            prod = prod * entries[i][perm[i]]
            if prod.is_zero:
                break
        out = out + (prod if sign > 0 else -prod)
    return out


def _parity(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _require_linear(grid) -> tuple:
    """Split a linear or affine grid into (LinearGrid, offset or None)."""
    if isinstance(grid, AffineGrid):
        return grid.linear, grid.offset
    if isinstance(grid, LinearGrid):
        return grid, None
    raise TypeError("closed Abel formulas need a linear (or affine) grid")


def linear_node_matrix(linear: LinearGrid, n) -> list:
    """The scalar-polynomial matrix B + C whose determinant leads the closed form.

    Row i is zero off the diagonal whenever n_i = 0, which is what makes
    the later division by x_i - z_{n,i} exact.
    """
    d = linear.dim
    n = mi.check_index(n, d)
    z_n = linear.node(n)
    a = linear.matrix
    entries = []
    for i in range(d):
        row = []
        for j in range(d):
            entry = MPoly.constant(d, n[i] * a[j][i])
            if i == j:
                entry = entry + MPoly.variable(d, i) - MPoly.constant(d, z_n[i])
            row.append(entry)
        entries.append(row)
    return entries


def abel_closed(system: SeparableSystem, grid, n,
                basic: BasicSequence | None = None) -> MPoly:
    """Closed determinant-times-quotients form of the Abel polynomial."""
    if not isinstance(system, SeparableSystem):
        raise TypeError("closed Abel formulas need a separable system")
    linear, offset = _require_linear(grid)
    d = system.dim
    n = mi.check_index(n, d)
    if basic is None:
        basic = BasicSequence(system)
    z_n = linear.node(n)
    out = _poly_det(linear_node_matrix(linear, n))

    for i in range(d):
        linear_factor = MPoly.variable(d, i) - MPoly.constant(d, z_n[i])
        if n[i] == 0:
            out = out.exact_divide(linear_factor)
        else:
            shift = tuple(-z_n[i] if j == i else ZERO for j in range(d))
            quotient = basic.univariate(i, n[i]).translate(shift).exact_divide(linear_factor)
            out = out * quotient
    if offset is not None:
        out = out.translate(tuple(-c for c in offset))
    return out


def operator_matrix_cells(system: SeparableSystem, linear: LinearGrid) -> list:
    """The operator matrix F + G driving the operator route.

    F is diagonal with the Pincherle derivative of each operator along its
    own axis; the (i, j) cell of G is a_{j,i} times the i-th operator.
    Independent of the target index, so one matrix serves a whole family.
    """
    d = system.dim
    a = linear.matrix
    cells = []
    for i in range(d):
        row = []
        d_i = system.ops[i]
        for j in range(d):
            op = d_i.scale(a[j][i])
            if i == j:
                op = d_i.pincherle(i) + op
            row.append(op)
        cells.append(row)
    return cells


def abel_operator_form(system: SeparableSystem, grid, n,
                       basic: BasicSequence | None = None) -> MPoly:
    """Pure operator route to the same polynomial.

    Applies the inverse factor powers and the inverse shifts to the
    monomial x^n, then the operator determinant det(F + G) expanded as a
    signed sum over permutations in lexicographic order, each product
    applied from the last axis to the first.
    """
    if not isinstance(system, SeparableSystem):
        raise TypeError("closed Abel formulas need a separable system")
    linear, offset = _require_linear(grid)
    d = system.dim
    n = mi.check_index(n, d)
    z_n = linear.node(n)

    p = MPoly.monomial(d, n)
    p = p.translate(tuple(-c for c in z_n))
    for i in range(d):
        inv_power = ShiftInvariantOp(system.factors[i].power(-(n[i] + 1)))
        p = inv_power.apply(p)

    cells = operator_matrix_cells(system, linear)
    out = MPoly.zero(d)
    for perm in permutations(range(d)):
        sign = _parity(perm)
        image = p
        for i in range(d - 1, -1, -1):
            image = cells[i][perm[i]].apply(image)
            if image.is_zero:
                break
        out = out + (image if sign > 0 else -image)
    if offset is not None:
        out = out.translate(tuple(-c for c in offset))
    return out


def shifted_basic_system(system: DeltaSystem, grid: LinearGrid) -> DeltaSystem:
    """The system d_i E_{t_i} whose basic sequence is the Abel family.

    t_i is the i-th column of the grid matrix; separability is not needed.
    """
    linear, offset = _require_linear(grid)
    if offset is not None:
        raise TypeError("the shifted system is defined for linear grids only")
    ops = [
        system.ops[i].compose(shift_op(system.dim, linear.column(i)))
        for i in range(system.dim)
    ]
    return validate_system(ops)


# ----------------------------------------------------------------------
# binomial-type classification

@dataclass(frozen=True)
class ClassifyReport:
    """Two independent verdicts on whether a grid yields a binomial-type family.

    geometric: the nodes coincide with A k for the matrix A read off the
    unit-index nodes.  algebraic: the generated polynomial table satisfies
    the binomial identity.  Both are certified only up to checked_degree.
    """

    geometric_ok: bool
    geometric_witness: Optional[tuple]
    algebraic_ok: bool
    algebraic_witness: Optional[tuple]
    checked_degree: int
    fitted_matrix: Optional[tuple]

    @property
    def binomial_type(self) -> bool:
        return self.geometric_ok and self.algebraic_ok


def binomial_type_classify(system: DeltaSystem, grid: InterpolationGrid,
                           maxdeg: int) -> ClassifyReport:
    """Decide binomial type of the family on a grid, up to a degree bound."""
    d = system.dim
    columns = [grid.node(mi.unit(d, i)) for i in range(d)]
    fitted = tuple(tuple(columns[j][i] for j in range(d)) for i in range(d))
    geometric_ok, geometric_witness = True, None
    for k in mi.indices_up_to_weight(d, maxdeg):
        predicted = tuple(
            sum((columns[j][i] * k[j] for j in range(d)), ZERO) for i in range(d)
        )
        if grid.node(k) != predicted:
            geometric_ok, geometric_witness = False, k
            break

    table = GoncarovTable(system, grid).populate(maxdeg)
    algebraic = binomial_identity_check(table, maxdeg, d)

    return ClassifyReport(
        geometric_ok,
        geometric_witness,
        algebraic.passed,
        algebraic.witness,
        maxdeg,
        fitted if geometric_ok else None,
    )
