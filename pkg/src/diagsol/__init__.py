"""diagsol: curvature, flatness and almost eta-Ricci solitons for
3-dimensional diagonal Riemannian metrics, with numerical cross-checks.

The metric class is g = (1/f1^2) dx1 (x) dx1 + (1/f2^2) dx2 (x) dx2 +
dx3 (x) dx3 on a box in R^3, handled in the orthonormal frame E1 = f1 d1,
E2 = f2 d2, E3 = d3. All closed-form results (connection and curvature
tables, flatness criteria, soliton families) are backed by independent
finite-difference or quadrature oracles.
"""

from .expressions import (
    Antideriv,
    AntiderivativeFn,
    Const,
    DomainBox,
    DomainError,
    ExpressionError,
    Expr,
    ParseError,
    Var,
    antiderivative_numeric,
    as_expr,
    diff,
    evaluate,
    exp,
    finite_difference,
    finite_difference2,
    free_axes,
    ln,
    parse_expr,
    sqrt,
    to_text,
    unit_box,
)
from .quadrature import QuadratureError, adaptive_simpson
from .tape import backend_name, compile_tape, eval_many
from .metric import (
    CaseTag,
    DiagonalMetric,
    MetricError,
    OneForm,
    StructureFunctions,
    VectorField,
    classify,
    eta_dx3,
    lie_bracket_table,
    load_metric,
    metric_from_dict,
    metric_to_dict,
    sample_grid,
    save_metric,
    structure_functions,
    to_coordinate_components,
    unit_v3,
    vector_from_coordinates,
    oneform_from_coordinates,
)
from .curvature import (
    RicciMatrix,
    connection_table,
    ricci_coordinate_oracle,
    ricci_frame,
    riemann_frame,
    riemann_from_definition,
)
from .flatness import (
    FlatnessVerdict,
    SeparationOdeSolution,
    SeparationOdeSpec,
    UnsupportedCaseError,
    construct_flat_partner_x2,
    flatness_criterion,
    riemann_sup,
    solve_separation_ode,
)
from .soliton import (
    PinnedComponentError,
    ResidualReport,
    SolitonConventionWarning,
    SolitonData,
    SolitonKind,
    is_killing,
    lie_derivative_fd_oracle,
    lie_derivative_metric,
    load_soliton,
    residual,
    residual_equations,
    residual_specialized,
    save_soliton,
    soliton_from_dict,
    soliton_kind,
    soliton_to_dict,
)
from .solutions import (
    BranchAmbiguityError,
    CaseMismatchError,
    CatalogueEntry,
    CompatibilityError,
    FAMILIES,
    builtin_examples,
    catalogue_entry,
    construct_both2,
    construct_both3,
    construct_sep,
    construct_x1x3,
    construct_x2x1,
    construct_x2x3,
    lambda_mu_for_unit_v3,
)

__version__ = "0.1.0"
