"""Closed-form soliton constructors, one per dependency case, plus the
built-in example catalogue.

Every constructor returns SolitonData with eta = dx3 (the unit-v3 family
pins V = d/dx3 as well) whose residual vanishes identically; the test suite
verifies each against the general six-equation system. Where a family leaves
a function free (lambda in the equal-profiles branch of both3, the flow
profiles F and G, the vertical component when f2 is constant), it is an
explicit parameter with a zero default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expressions import (
    Antideriv,
    Const,
    DomainBox,
    Expr,
    Var,
    as_expr,
    diff,
    free_axes,
    parse_expr,
    unit_box,
)
from .metric import (
    CaseTag,
    DiagonalMetric,
    OneForm,
    VectorField,
    check_metric_on_grid,
    classify,
    eta_dx3,
    sample_grid,
    structure_functions,
    unit_v3,
)
from .soliton import SolitonData, SolitonKind
from .tape import eval_many

# Grid threshold for branch decisions (constant / nowhere-zero splits).
BRANCH_TOL = 1e-10
# Tolerance for compatibility identities that the input metric must satisfy.
COMPAT_TOL = 1e-8


class CaseMismatchError(ValueError):
    """Metric's dependency case does not match the requested family."""


class BranchAmbiguityError(ValueError):
    """A branch function changes character across the grid (e.g. b - d
    vanishes somewhere but not everywhere); pass an explicit branch hint."""


class CompatibilityError(ValueError):
    """A compatibility identity required by the family fails on the grid."""

    def __init__(self, message: str, max_violation: float):
        super().__init__(f"{message} (max violation {max_violation:.3e})")
        self.max_violation = max_violation


_FAMILY_AXES = {
    CaseTag.SEP: (frozenset((1,)), frozenset((2,))),
    CaseTag.BOTH3: (frozenset((3,)), frozenset((3,))),
    CaseTag.X1X3: (frozenset((1,)), frozenset((3,))),
    CaseTag.BOTH2: (frozenset((2,)), frozenset((2,))),
    CaseTag.X2X1: (frozenset((2,)), frozenset((1,))),
    CaseTag.X2X3: (frozenset((2,)), frozenset((3,))),
}


def _require_case(m: DiagonalMetric, tag: CaseTag, family: str) -> None:
    # Compatibility, not the canonical tag: constant profiles fit every
    # single-variable hypothesis even though classify() resolves them to the
    # highest-priority case.
    p1, p2 = _FAMILY_AXES[tag]
    if not (free_axes(m.f1) <= p1 and free_axes(m.f2) <= p2):
        raise CaseMismatchError(
            f"family '{family}' needs f1 = f1({_axis_name(p1)}) and "
            f"f2 = f2({_axis_name(p2)}); metric classifies as "
            f"{classify(m).value}"
        )


def _axis_name(axes: frozenset) -> str:
    return f"x{min(axes)}"


def _sup(e: Expr, pts) -> float:
    return float(np.abs(eval_many(e, pts)).max())


def _expr_param(value, allowed_axes: set, name: str) -> Expr:
    e = as_expr(value if value is not None else 0.0)
    extra = free_axes(e) - frozenset(allowed_axes)
    if extra:
        axes = ", ".join(f"x{a}" for a in sorted(allowed_axes)) or "constants"
        raise ValueError(f"{name} may only depend on {axes}; found x{sorted(extra)[0]}")
    return e


def construct_sep(
    m: DiagonalMetric,
    lam: float = 0.0,
    mu: float = 0.0,
    c: tuple = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
) -> SolitonData:
    """Separable case f1(x1), f2(x2) with eta = dx3; lambda, mu constants.

    V1 = -lam F1 + c1 F2 + c2 x3 + c3
    V2 = -c1 F1 - lam F2 + c4 x3 + c5
    V3 = -c2 F1 - c4 F2 - (lam + mu) x3 + c6
    with F_i the antiderivative of 1/f_i. lam = mu = 0 and c2 = c4 = 0 gives
    a Killing field.
    """
    _require_case(m, CaseTag.SEP, "sep")
    check_metric_on_grid(m, sample_grid(m.domain, 9))
    if len(c) != 6:
        raise ValueError("c must supply six constants")
    c1, c2, c3, c4, c5, c6 = (float(v) for v in c)
    lam = float(lam)
    mu = float(mu)
    f_one = Antideriv(Const(1.0) / m.f1, 1, m.domain.x1[0])
    f_two = Antideriv(Const(1.0) / m.f2, 2, m.domain.x2[0])
    x3 = Var(3)
    v1 = Const(-lam) * f_one + Const(c1) * f_two + Const(c2) * x3 + Const(c3)
    v2 = Const(-c1) * f_one + Const(-lam) * f_two + Const(c4) * x3 + Const(c5)
    v3 = (
        Const(-c2) * f_one
        + Const(-c4) * f_two
        + Const(-(lam + mu)) * x3
        + Const(c6)
    )
    return SolitonData(m, VectorField((v1, v2, v3)), eta_dx3(), Const(lam), Const(mu))


def construct_both3(
    m: DiagonalMetric,
    c1: float = 0.0,
    c2: float = 0.0,
    lam=None,
    F=None,
    branch: str | None = None,
    grid_n: int = 9,
) -> SolitonData:
    """Profiles f1(x3), f2(x3) with eta = dx3 and V = V(x3).

    Writing b = f1'/f1 and d = f2'/f2, the branch is decided by b - d on the
    grid (threshold 1e-10, overridable with branch='distinct'|'equal'):

    * distinct (b != d everywhere): V3, lambda, mu are all determined,
      lambda = (b'd - bd')/(b - d) etc.
    * equal with b nowhere zero: lambda is free (input, default 0, may depend
      on x3); V3 = (b' - 2b^2 + lambda)/b and mu = -((b'+lambda)/b)' + 2b^2
      - lambda.
    * equal with b = 0 (both profiles constant): V3 = F (input, default 0)
      and mu = -F'.

    V1 and V2 are c1/f1 and c2/f2 (plain constants in the last branch).
    """
    _require_case(m, CaseTag.BOTH3, "both3")
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    s = structure_functions(m)
    b, d = s.b, s.d
    gap = np.abs(eval_many(b - d, pts))
    if branch is None:
        if gap.min() > BRANCH_TOL:
            branch = "distinct"
        elif gap.max() <= BRANCH_TOL:
            branch = "equal"
        else:
            raise BranchAmbiguityError(
                f"b - d vanishes on part of the grid (min {gap.min():.2e}, "
                f"max {gap.max():.2e}); pass branch='distinct' or 'equal'"
            )
    if branch not in ("distinct", "equal"):
        raise ValueError("branch must be 'distinct' or 'equal'")

    eta = eta_dx3()
    if branch == "distinct":
        gap_expr = b - d
        gap_p = diff(gap_expr, 3)
        wron = diff(b, 3) * d - b * diff(d, 3)
        v3 = gap_p / gap_expr - (b + d)
        lam_e = wron / gap_expr
        mu_e = (
            -((diff(gap_p, 3) + wron) / gap_expr)
            + (gap_p / gap_expr) ** 2
            + b * b
            + d * d
        )
        v = VectorField((Const(c1) / m.f1, Const(c2) / m.f2, v3))
        return SolitonData(m, v, eta, lam_e, mu_e)

    b_abs = np.abs(eval_many(b, pts))
    if b_abs.min() > BRANCH_TOL:
        lam_e = _expr_param(lam, {3}, "lam")
        bp = diff(b, 3)
        v3 = (bp - Const(2.0) * b * b + lam_e) / b
        mu_e = -diff((bp + lam_e) / b, 3) + Const(2.0) * b * b - lam_e
        v = VectorField((Const(c1) / m.f1, Const(c2) / m.f2, v3))
        return SolitonData(m, v, eta, lam_e, mu_e)
    if b_abs.max() <= BRANCH_TOL:
        if lam is not None:
            raise ValueError("lambda is forced to 0 when both profiles are constant")
        f_e = _expr_param(F, {3}, "F")
        v = VectorField((Const(c1), Const(c2), f_e))
        return SolitonData(m, v, eta, Const(0.0), -diff(f_e, 3))
    raise BranchAmbiguityError(
        "f1'/f1 vanishes on part of the grid in the equal-profiles branch"
    )


def construct_x1x3(
    m: DiagonalMetric,
    c1: float = 0.0,
    c2: float = 0.0,
    F=None,
    grid_n: int = 9,
) -> SolitonData:
    """Profiles f1(x1), f2(x3) with eta = dx3 and V = V(x3); lambda = 0.

    With d = f2'/f2 nowhere zero: V = (c1, c2/f2, (d'-d^2)/d) and
    mu = -d''/d + (d'/d)^2 + d^2. With f2 constant, V3 = F (input) and
    mu = -F'.
    """
    _require_case(m, CaseTag.X1X3, "x1x3")
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    d = structure_functions(m).d
    d_abs = np.abs(eval_many(d, pts))
    eta = eta_dx3()
    if d_abs.max() <= BRANCH_TOL:
        f_e = _expr_param(F, {3}, "F")
        v = VectorField((Const(c1), Const(c2), f_e))
        return SolitonData(m, v, eta, Const(0.0), -diff(f_e, 3))
    if d_abs.min() <= BRANCH_TOL:
        raise BranchAmbiguityError("f2'/f2 vanishes on part of the grid")
    dp = diff(d, 3)
    v3 = (dp - d * d) / d
    mu_e = -(diff(dp, 3) / d) + (dp / d) ** 2 + d * d
    v = VectorField((Const(c1), Const(c2) / m.f2, v3))
    return SolitonData(m, v, eta, Const(0.0), mu_e)


def construct_both2(
    m: DiagonalMetric,
    c1: float = 0.0,
    c2: float = 0.0,
    G=None,
    v3_ref: float = 0.0,
    grid_n: int = 9,
) -> SolitonData:
    """Profiles f1(x2), f2(x2) with eta = dx3 and V = (c1, c2, F), F' = G.

    lambda = 2 f2^2 (f1'/f1)^2 - f2 f2' (f1'/f1) - f2^2 f1''/f1 and
    mu = -lambda - G. When f1 is not constant, c1 = c2 = 0 is mandatory.
    v3_ref sets the integration constant: V3 = v3_ref + antideriv(G).
    """
    _require_case(m, CaseTag.BOTH2, "both2")
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    f1p = diff(m.f1, 2)
    if _sup(f1p, pts) > BRANCH_TOL and (c1 != 0.0 or c2 != 0.0):
        raise ValueError("c1 and c2 must vanish when f1 is not constant")
    g_e = _expr_param(G, {3}, "G")
    t1 = f1p / m.f1
    f2p = diff(m.f2, 2)
    lam_e = (
        Const(2.0) * m.f2**2 * t1**2
        - m.f2 * f2p * t1
        - m.f2**2 * (diff(f1p, 2) / m.f1)
    )
    v3 = Const(float(v3_ref)) + Antideriv(g_e, 3, m.domain.x3[0])
    v = VectorField((Const(c1), Const(c2), v3))
    return SolitonData(m, v, eta_dx3(), lam_e, -lam_e - g_e)


def construct_x2x1(
    m: DiagonalMetric,
    c1: float = 0.0,
    c2: float = 0.0,
    F=None,
    grid_n: int = 9,
) -> SolitonData:
    """Crossed profiles f1(x2), f2(x1) with eta = dx3 and V = (c1, c2, F).

    lambda = c1 f1 (f2'/f2) + f1^2 [(f2'/f2)^2 - (f2'/f2)'] +
    f2^2 [(f1'/f1)^2 - (f1'/f1)'], mu = -lambda - F'. Nonzero c1 or c2
    requires constant profiles.
    """
    _require_case(m, CaseTag.X2X1, "x2x1")
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    if c1 != 0.0 or c2 != 0.0:
        if _sup(diff(m.f1, 2), pts) > BRANCH_TOL or _sup(diff(m.f2, 1), pts) > BRANCH_TOL:
            raise ValueError(
                "nonzero c1 or c2 requires both profiles to be constant"
            )
    f_e = _expr_param(F, {3}, "F")
    t1 = diff(m.f1, 2) / m.f1
    t2 = diff(m.f2, 1) / m.f2
    lam_e = (
        Const(c1) * m.f1 * t2
        + m.f1**2 * (t2**2 - diff(t2, 1))
        + m.f2**2 * (t1**2 - diff(t1, 2))
    )
    v = VectorField((Const(c1), Const(c2), f_e))
    return SolitonData(m, v, eta_dx3(), lam_e, -lam_e - diff(f_e, 3))


def construct_x2x3(
    m: DiagonalMetric,
    c1: float = 0.0,
    c2: float = 0.0,
    c3: float = 0.0,
    F=None,
    v3=None,
    grid_n: int = 9,
) -> SolitonData:
    """Profiles f1(x2), f2(x3) with eta = dx3 and V = V(x3).

    The structure function a = f2 f1'/f1 must split as a = -c2 f2 + F(x2)
    (grid-checked). V2 = c2 f2 + c3/f2; where d = f2'/f2 is nowhere zero,
    V3 = (a V2 + d' - d^2)/d, otherwise V3 is the free input v3 (default 0).
    lambda = a V2 - f2 F' + a^2 and mu = -(V3)' - (d' - d^2) - lambda.
    Nonzero c1 forces a = 0; a non-constant f2 forces f1'/f1 = -c2.
    """
    _require_case(m, CaseTag.X2X3, "x2x3")
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    s = structure_functions(m)
    a, d = s.a, s.d
    f_e = _expr_param(F, {2}, "F")
    split_violation = _sup(a - (Const(-c2) * m.f2 + f_e), pts)
    if split_violation > COMPAT_TOL:
        raise CompatibilityError(
            "a = f2 f1'/f1 must equal -c2 f2 + F on the grid", split_violation
        )
    if c1 != 0.0:
        a_sup = _sup(a, pts)
        if a_sup > BRANCH_TOL:
            raise CompatibilityError(
                "nonzero c1 requires a = 0 (constant f1)", a_sup
            )
    if _sup(diff(m.f2, 3), pts) > BRANCH_TOL:
        ratio_violation = _sup(diff(m.f1, 2) / m.f1 + Const(c2), pts)
        if ratio_violation > COMPAT_TOL:
            raise CompatibilityError(
                "non-constant f2 requires f1'/f1 = -c2 (f1 = c4 e^{-c2 x2})",
                ratio_violation,
            )
    v2 = Const(c2) * m.f2 + Const(c3) / m.f2
    d_abs = np.abs(eval_many(d, pts))
    if d_abs.min() > BRANCH_TOL:
        v3_e = (a * v2 + diff(d, 3) - d * d) / d
        if v3 is not None:
            raise ValueError("v3 is determined when f2 is not constant")
    elif d_abs.max() <= BRANCH_TOL:
        v3_e = _expr_param(v3, {3}, "v3")
    else:
        raise BranchAmbiguityError("f2'/f2 vanishes on part of the grid")
    lam_e = a * v2 - m.f2 * diff(f_e, 2) + a * a
    mu_e = -diff(v3_e, 3) - (diff(d, 3) - d * d) - lam_e
    v = VectorField((Const(c1), v2, v3_e))
    return SolitonData(m, v, eta_dx3(), lam_e, mu_e)


def lambda_mu_for_unit_v3(
    m: DiagonalMetric,
    grid_n: int = 9,
    tol: float = COMPAT_TOL,
) -> SolitonData:
    """Soliton data with V = d/dx3 and eta = dx3, lambda and mu closed-form.

    Dispatches on the dependency case; compatibility identities the metric
    must satisfy (both3, x1x3, x2x3) are grid-checked and reported with the
    maximum violation. The separable case is degenerate (forces mu = 0) and
    is rejected.
    """
    tag = classify(m)
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    s = structure_functions(m)
    b, d, a, c = s.b, s.d, s.a, s.c

    if tag is CaseTag.BOTH3:
        lhs = diff(b, 3) - b - b * b
        rhs = diff(d, 3) - d - d * d
        viol = _sup(lhs - rhs, pts)
        if viol > tol:
            raise CompatibilityError(
                "profiles must satisfy b' - b - b^2 = d' - d - d^2 "
                "(b = f1'/f1, d = f2'/f2)",
                viol,
            )
        lam_e = b + b * d + b * b - diff(b, 3)
        mu_e = -b - b * d - diff(d, 3) + d * d
    elif tag is CaseTag.X1X3:
        viol = _sup(diff(d, 3) - d - d * d, pts)
        if viol > tol:
            raise CompatibilityError(
                "f2 must satisfy d' = d(d + 1) (d = f2'/f2)", viol
            )
        lam_e = Const(0.0)
        mu_e = d * d - diff(d, 3)
    elif tag is CaseTag.BOTH2:
        lam_e = a * a - m.f2 * diff(a, 2)
        mu_e = -lam_e
    elif tag is CaseTag.X2X1:
        lam_e = a * a + c * c - m.f1 * diff(c, 1) - m.f2 * diff(a, 2)
        mu_e = -lam_e
    elif tag is CaseTag.X2X3:
        viol_d = _sup(diff(d, 3) - d * (d + Const(1.0)), pts)
        if viol_d > tol:
            raise CompatibilityError(
                "f2 must satisfy d' = d(d + 1) (d = f2'/f2)", viol_d
            )
        viol_p = _sup(diff(m.f1, 2) * diff(m.f2, 3), pts)
        if viol_p > tol:
            raise CompatibilityError("profiles must satisfy f1' f2' = 0", viol_p)
        lam_e = a * a - m.f2 * diff(a, 2)
        mu_e = -lam_e - (diff(d, 3) - d * d)
    else:
        raise CaseMismatchError(
            f"unit-v3 family is unavailable for case {tag.value} "
            "(separable metrics force mu = 0; general metrics unsupported)"
        )
    return SolitonData(m, unit_v3(), eta_dx3(), lam_e, mu_e)


FAMILIES = {
    "sep": construct_sep,
    "both3": construct_both3,
    "x1x3": construct_x1x3,
    "both2": construct_both2,
    "x2x1": construct_x2x1,
    "x2x3": construct_x2x3,
    "unit-v3": lambda_mu_for_unit_v3,
}


# ---------------------------------------------------------------------------
# Built-in catalogue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    description: str
    soliton: SolitonData
    expected_lambda: Expr
    expected_mu: Expr
    expected_kind: SolitonKind


def _metric(f1: str, f2: str, box: DomainBox | None = None) -> DiagonalMetric:
    return DiagonalMetric(parse_expr(f1), parse_expr(f2), box or unit_box())


def builtin_examples() -> list[CatalogueEntry]:
    """The worked-example catalogue; every entry passes the residual check."""
    entries: list[CatalogueEntry] = []

    sol3 = _metric("exp(-x3)", "exp(x3)")
    entries.append(
        CatalogueEntry(
            "sol3",
            "Sol3 geometry: horizontal translations, lambda=0, mu=2",
            construct_both3(sol3, c1=1.0, c2=1.0),
            Const(0.0),
            Const(2.0),
            SolitonKind.STEADY,
        )
    )

    h2xr = _metric("x2", "x2", DomainBox((-1, 1), (0.5, 2), (-1, 1)))
    entries.append(
        CatalogueEntry(
            "h2xr",
            "H^2 x R: vertical unit field, lambda=1, mu=-1",
            construct_both2(h2xr, v3_ref=1.0),
            Const(1.0),
            Const(-1.0),
            SolitonKind.EXPANDING,
        )
    )

    entries.append(
        CatalogueEntry(
            "x1x3-exp",
            "f1=exp(x1), f2=exp(x3): lambda=0, mu=1",
            construct_x1x3(_metric("exp(x1)", "exp(x3)"), c1=1.0, c2=1.0),
            Const(0.0),
            Const(1.0),
            SolitonKind.STEADY,
        )
    )

    entries.append(
        CatalogueEntry(
            "both3-exp",
            "f1=f2=exp(x3) under the vertical unit field: lambda=3, mu=-1",
            lambda_mu_for_unit_v3(_metric("exp(x3)", "exp(x3)")),
            Const(3.0),
            Const(-1.0),
            SolitonKind.EXPANDING,
        )
    )

    entries.append(
        CatalogueEntry(
            "both2-exp",
            "f1=exp(-x2), f2=exp(x2): lambda=2e^{2x2}, mu=-lambda",
            lambda_mu_for_unit_v3(_metric("exp(-x2)", "exp(x2)")),
            parse_expr("2*exp(2*x2)"),
            parse_expr("-2*exp(2*x2)"),
            SolitonKind.NON_CONSTANT,
        )
    )

    entries.append(
        CatalogueEntry(
            "x2x1-unit",
            "f1=exp(x2), f2=exp(x1): lambda=e^{2x1}+e^{2x2}, mu=-lambda",
            lambda_mu_for_unit_v3(_metric("exp(x2)", "exp(x1)")),
            parse_expr("exp(2*x1) + exp(2*x2)"),
            parse_expr("-(exp(2*x1) + exp(2*x2))"),
            SolitonKind.NON_CONSTANT,
        )
    )

    entries.append(
        CatalogueEntry(
            "x2x3-exp",
            "f1=exp(x2), f2=exp(x3): lambda=1, mu=2e^{2x3}",
            construct_x2x3(_metric("exp(x2)", "exp(x3)"), c2=-1.0, c3=1.0),
            Const(1.0),
            parse_expr("2*exp(2*x3)"),
            SolitonKind.EXPANDING,
        )
    )

    entries.append(
        CatalogueEntry(
            "x2x1-flow",
            "crossed exponentials with vertical flow F=e^{2x3}/2",
            construct_x2x1(
                _metric("exp(x2)", "exp(x1)"), F=parse_expr("exp(2*x3)/2")
            ),
            parse_expr("exp(2*x1) + exp(2*x2)"),
            parse_expr("-(exp(2*x1) + exp(2*x2) + exp(2*x3))"),
            SolitonKind.NON_CONSTANT,
        )
    )

    entries.append(
        CatalogueEntry(
            "x1x3-decay",
            "f1=exp(x1), f2=exp(-x3) under the vertical unit field",
            lambda_mu_for_unit_v3(_metric("exp(x1)", "exp(-x3)")),
            Const(0.0),
            Const(1.0),
            SolitonKind.STEADY,
        )
    )

    entries.append(
        CatalogueEntry(
            "x1x3-logistic",
            "f2=1/(e^{x3}+1): lambda=0, mu=e^{x3}/(e^{x3}+1)",
            lambda_mu_for_unit_v3(_metric("exp(x1)", "1/(exp(x3) + 1)")),
            Const(0.0),
            parse_expr("exp(x3)/(exp(x3) + 1)"),
            SolitonKind.STEADY,
        )
    )

    entries.append(
        CatalogueEntry(
            "both3-decay",
            "f1=1, f2=exp(-x3) under the vertical unit field: lambda=0, mu=1",
            lambda_mu_for_unit_v3(_metric("1", "exp(-x3)")),
            Const(0.0),
            Const(1.0),
            SolitonKind.STEADY,
        )
    )

    entries.append(
        CatalogueEntry(
            "sep-exp",
            "separable exponentials with lambda=mu=1",
            construct_sep(_metric("exp(x1)", "exp(x2)"), lam=1.0, mu=1.0),
            Const(1.0),
            Const(1.0),
            SolitonKind.EXPANDING,
        )
    )

    # eta = 0 family: f1 = f2 = e^{e^{-x3}} solves b' = -b, giving an almost
    # Ricci soliton (no eta term) with non-constant lambda = 2(b^2 - b').
    dexp = _metric("exp(exp(-x3))", "exp(exp(-x3))")
    b = diff(dexp.f1, 3) / dexp.f1
    entries.append(
        CatalogueEntry(
            "eta0-both3",
            "f1=f2=exp(exp(-x3)), eta=0: almost Ricci soliton, "
            "lambda=2(e^{-2x3}-e^{-x3})",
            SolitonData(
                dexp,
                unit_v3(),
                OneForm((Const(0.0), Const(0.0), Const(0.0))),
                Const(2.0) * (b * b - diff(b, 3)),
                Const(0.0),
            ),
            parse_expr("2*(exp(-2*x3) - exp(-x3))"),
            Const(0.0),
            SolitonKind.NON_CONSTANT,
        )
    )

    return entries


def catalogue_entry(name: str) -> CatalogueEntry:
    for entry in builtin_examples():
        if entry.name == name:
            return entry
    raise KeyError(f"no catalogue entry named {name!r}")
