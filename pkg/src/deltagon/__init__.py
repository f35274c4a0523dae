"""Exact umbral calculus: delta-operator systems, interpolation on grids,
and closed formulas on linear grids.  Everything is exact rational
arithmetic; identities are checked by equality, never by tolerance.
"""

from .abel import (
    AffineGrid,
    ClassifyReport,
    LinearGrid,
    abel_closed,
    abel_operator_form,
    binomial_type_classify,
    linear_node_matrix,
    operator_matrix_cells,
    shifted_basic_system,
)
from .errors import (
    BadParams,
    DeltagonError,
    DimensionMismatch,
    InsufficientOrder,
    MissingNode,
    MissingValue,
    NonExactDivision,
    NonzeroConstantTerm,
    NotAdmissible,
    NotInSpan,
    NotInvertible,
    SingularJacobian,
    ZeroConstantTerm,
)
from .goncarov import (
    BiorthogonalityReport,
    GoncarovTable,
    InterpolationGrid,
    LowerSet,
    RuleGrid,
    TableGrid,
    biorthogonality_check,
    dense_goncarov_poly,
    expand_in_goncarov,
    goncarov_poly,
    interpolation_solve,
)
from .mpoly import MPoly
from .operators import (
    DeltaSystem,
    Indicator,
    SeparableSystem,
    ShiftInvariantOp,
    StrictnessReport,
    backward_difference_op,
    check_strict,
    derivative_op,
    forward_difference_op,
    identity_op,
    operator_from_spec,
    separable_system,
    shift_op,
    system_from_specs,
    validate_system,
)
from .rationals import Q, Rational, format_rational, parse_rational
from .render import render, render_latex, render_plain
from .sequences import (
    AppellReport,
    BasicAxiomReport,
    BasicSequence,
    BinomialReport,
    OriginGrid,
    PolySeries,
    appell_verify,
    basic_multivariate,
    basic_univariate,
    binomial_identity_check,
    verify_basic_properties,
)
from .series import SeriesSystem, TruncatedSeries

__version__ = "0.1.0"
