"""Flatness criteria per dependency case, plus the separation-ODE solver.

Each single-variable dependency case of (f1, f2) admits a closed criterion
equivalent to vanishing Riemann curvature:

  sep    always flat
  both3  f1'f2' = 0  and  (fi'/fi)' = (fi'/fi)^2 for both i
  x1x3   (f2'/f2)' = (f2'/f2)^2
  both2  (f1'/f1)(f2'/f2) + f1''/f1 = 2 (f1'/f1)^2
  x2x1   (f1''f1 - 2 f1'^2)/f1^4 = -(f2''f2 - 2 f2'^2)/f2^4 = constant
  x2x3   like both3 with f1 differentiated along x2

The constant / c1/(x - c2) alternatives are detected through the identity
(f'/f)' = (f'/f)^2 rather than by curve fitting: the identity is exactly
equivalent. Every verdict also carries the numeric sup of the Riemann
components over the grid so the two routes can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expressions import Const, DomainBox, Expr, as_expr, diff, free_axes
from .metric import (
    CASE_AXES,
    CaseTag,
    DiagonalMetric,
    check_metric_on_grid,
    classify,
    grid_constant,
    grid_nonzero,
    sample_grid,
)
from .curvature import riemann_frame
from .quadrature import adaptive_simpson
from .tape import eval_many

DEFAULT_TOL_FLAT = 1e-7
DEFAULT_GRID = 9


class UnsupportedCaseError(ValueError):
    """Raised for metrics outside the single-variable dependency cases.

    Carries the numeric Riemann sup so callers can still report it.
    """

    def __init__(self, message: str, numeric_sup: float):
        super().__init__(message)
        self.numeric_sup = numeric_sup


@dataclass(frozen=True)
class FlatnessVerdict:
    case: CaseTag
    criterion_holds: bool
    criterion_description: str
    numeric_sup: float
    agrees: bool
    tol: float


def riemann_sup(m: DiagonalMetric, pts: np.ndarray) -> float:
    """max |R(E_i,E_j)E_k component| over the grid, all index triples."""
    sup = 0.0
    for i, j in ((1, 2), (1, 3), (2, 3)):
        for k in (1, 2, 3):
            for comp in riemann_frame(m, i, j, k):
                if comp == Const(0.0):
                    continue
                sup = max(sup, float(np.abs(eval_many(comp, pts)).max()))
    return sup


def _log_deriv_identity(f: Expr, axis: int) -> Expr:
    """(f'/f)' - (f'/f)^2; identically zero iff f is constant or c1/(x-c2)."""
    q = diff(f, axis) / f
    return diff(q, axis) - q * q


def _sup(e: Expr, pts) -> float:
    return float(np.abs(eval_many(e, pts)).max())


def flatness_criterion(
    m: DiagonalMetric,
    grid_n: int = DEFAULT_GRID,
    tol_flat: float = DEFAULT_TOL_FLAT,
) -> FlatnessVerdict:
    """Evaluate the dependency case's flatness criterion on the grid.

    Raises UnsupportedCaseError for the general (multi-variable) case; the
    error still carries the numeric Riemann sup.
    """
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    tag = classify(m)
    sup = riemann_sup(m, pts)
    if tag is CaseTag.GENERAL:
        raise UnsupportedCaseError(
            "no closed-form flatness criterion for multi-variable profiles", sup
        )
    ax1, ax2 = CASE_AXES[tag]

    if tag is CaseTag.SEP:
        holds = True
        desc = "separable profiles f1(x1), f2(x2): flat unconditionally"
    elif tag in (CaseTag.BOTH3, CaseTag.X2X3):
        r1 = _sup(_log_deriv_identity(m.f1, ax1), pts)
        r2 = _sup(_log_deriv_identity(m.f2, ax2), pts)
        prod = _sup(diff(m.f1, ax1) * diff(m.f2, ax2), pts)
        holds = r1 <= tol_flat and r2 <= tol_flat and prod <= tol_flat
        desc = (
            f"f1'f2' = 0 and (fi'/fi)' = (fi'/fi)^2 for both profiles; "
            f"residuals ({prod:.2e}, {r1:.2e}, {r2:.2e})"
        )
    elif tag is CaseTag.X1X3:
        r2 = _sup(_log_deriv_identity(m.f2, ax2), pts)
        holds = r2 <= tol_flat
        desc = f"(f2'/f2)' = (f2'/f2)^2; residual {r2:.2e}"
    elif tag is CaseTag.BOTH2:
        t1 = diff(m.f1, 2) / m.f1
        t2 = diff(m.f2, 2) / m.f2
        res = _sup(t1 * t2 + diff(diff(m.f1, 2), 2) / m.f1 - Const(2.0) * t1 * t1, pts)
        holds = res <= tol_flat
        desc = f"(f1'/f1)(f2'/f2) + f1''/f1 = 2(f1'/f1)^2; residual {res:.2e}"
    else:  # X2X1
        s1 = _separation_ratio(m.f1, 2)
        s2 = _separation_ratio(m.f2, 1)
        v1 = eval_many(s1, pts)
        v2 = eval_many(s2, pts)
        anti = float(np.abs(v1 + v2).max())
        holds = (
            anti <= tol_flat
            and grid_constant(v1, tol_flat)
            and grid_constant(v2, tol_flat)
        )
        desc = (
            "(f1''f1 - 2f1'^2)/f1^4 = -(f2''f2 - 2f2'^2)/f2^4 = const; "
            f"antisymmetry residual {anti:.2e}"
        )

    agrees = holds == (sup < tol_flat)
    return FlatnessVerdict(tag, holds, desc, sup, agrees, tol_flat)


def _separation_ratio(f: Expr, axis: int) -> Expr:
    fp = diff(f, axis)
    fpp = diff(fp, axis)
    return (fpp * f - Const(2.0) * fp * fp) / f**4


def construct_flat_partner_x2(
    f1: Expr,
    c0: float,
    box: DomainBox,
    grid_n: int = DEFAULT_GRID,
) -> Expr:
    """Companion profile f2 = c0 f1^2 / f1' making (f1, f2) flat (both2 case).

    Requires f1 = f1(x2) with f1' nowhere zero on the box (grid-checked).
    """
    f1 = as_expr(f1)
    if c0 == 0:
        raise ValueError("c0 must be nonzero")
    if not free_axes(f1) <= {2}:
        raise ValueError("f1 must depend only on x2")
    f1p = diff(f1, 2)
    pts = sample_grid(box, grid_n)
    if not grid_nonzero(eval_many(f1p, pts)):
        raise ValueError("f1' vanishes on the sampling grid")
    return Const(float(c0)) * f1**2 / f1p


# ---------------------------------------------------------------------------
# Separation ODE: (f'' f - 2 f'^2) / f^4 = k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationOdeSpec:
    """Data for the constructive solution of (f''f - 2(f')^2)/f^4 = k.

    J is an open interval with 0 outside it and -2k ln|y| + r > 0 on it;
    epsilon is +1 or -1; c0 shifts the independent variable.
    """

    k: float
    r: float
    J: tuple[float, float]
    c0: float = 0.0
    epsilon: int = 1

    def __post_init__(self):
        lo, hi = self.J
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"J must be a finite interval, got {self.J}")
        if lo <= 0.0 <= hi:
            raise ValueError("0 must lie outside J")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        for y in (lo, hi):
            if -2.0 * self.k * math.log(abs(y)) + self.r <= 0.0:
                raise ValueError(
                    f"-2k ln|y| + r must be positive on J; fails at y = {y}"
                )


_ODE_QUAD_TOL = 1e-13


class SeparationOdeSolution:
    """f on I_J with (f''f - 2(f')^2)/f^4 = k, built by inverting F.

    F is the antiderivative of y -> 1/sqrt(-2k ln|y| + r) on J (zero at the
    left end), strictly increasing; h(x) = F^-1(eps*x + c0) satisfies
    h''h = -k, and f = 1/h.
    """

    def __init__(self, spec: SeparationOdeSpec):
        self.spec = spec
        lo, hi = spec.J
        k, r = spec.k, spec.r

        def integrand(y: float) -> float:
            return 1.0 / math.sqrt(-2.0 * k * math.log(abs(y)) + r)

        self._integrand = integrand
        self._anchors = {lo: 0.0}
        self._f_hi = self._F(hi)
        if spec.epsilon == 1:
            self.domain = (-spec.c0, self._f_hi - spec.c0)
        else:
            self.domain = (spec.c0 - self._f_hi, spec.c0)

    def _F(self, y: float) -> float:
        cached = self._anchors.get(y)
        if cached is not None:
            return cached
        anchor = min(self._anchors, key=lambda a: abs(a - y))
        value = self._anchors[anchor] + adaptive_simpson(
            self._integrand, anchor, y, tol=_ODE_QUAD_TOL
        )
        self._anchors[y] = value
        return value

    def F(self, y: float) -> float:
        lo, hi = self.spec.J
        if not lo <= y <= hi:
            raise ValueError(f"F argument {y} outside J = {self.spec.J}")
        return self._F(y)

    def F_inv(self, s: float) -> float:
        """Invert the strictly increasing F by bisection (Newton-polished)."""
        lo, hi = self.spec.J
        f_lo, f_hi = 0.0, self._f_hi
        if not f_lo - 1e-12 <= s <= f_hi + 1e-12:
            raise ValueError(f"bisection target {s} outside F(J) = [0, {f_hi}]")
        a, b = lo, hi
        while b - a > 1e-12 * max(1.0, abs(a)):
            mid = 0.5 * (a + b)
            if self._F(mid) < s:
                a = mid
            else:
                b = mid
        y = 0.5 * (a + b)
        for _ in range(2):  # F' is the integrand itself; polish to full precision
            y -= (self._F(y) - s) / self._integrand(y)
            y = min(max(y, lo), hi)
        return y

    def h(self, x: float) -> float:
        return self.F_inv(self.spec.epsilon * x + self.spec.c0)

    def f(self, x: float) -> float:
        return 1.0 / self.h(x)

    def __call__(self, x: float) -> float:
        return self.f(x)


def solve_separation_ode(spec: SeparationOdeSpec) -> SeparationOdeSolution:
    return SeparationOdeSolution(spec)
