"""Almost eta-Ricci soliton residuals.

The defining equation is (1/2) Lie_V g + Ric + lambda g + mu eta (x) eta = 0;
in the orthonormal frame it splits into six scalar equations indexed by
(1,1), (2,2), (3,3), (1,2), (1,3), (2,3). `residual` evaluates the general
system over a sampling grid; `residual_specialized` evaluates the pinned
forms for V = d/dx3, eta = dx3, or both, which agree with the general system
entrywise by construction.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curvature import connection_table, ricci_frame
from .expressions import Const, Expr, evaluate, parse_expr, to_text
from .metric import (
    DiagonalMetric,
    MetricError,
    OneForm,
    VectorField,
    check_metric_on_grid,
    frame_derivative,
    grid_constant,
    metric_from_dict,
    metric_to_dict,
    oneform_from_coordinates,
    sample_grid,
    structure_functions,
    to_coordinate_components,
    vector_from_coordinates,
)
from .tape import eval_many

DEFAULT_TOL_SOLITON = 1e-8
DEFAULT_GRID = 9

EQUATION_INDEX = ((1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3))


class SolitonConventionWarning(UserWarning):
    """eta is nonzero but mu vanishes on the grid (degenerate data)."""


class PinnedComponentError(ValueError):
    """Specialized system requested but the pinned components do not match."""


class SolitonKind(enum.Enum):
    SHRINKING = "shrinking"
    STEADY = "steady"
    EXPANDING = "expanding"
    NON_CONSTANT = "non-constant"


@dataclass(frozen=True)
class SolitonData:
    metric: DiagonalMetric
    V: VectorField
    eta: OneForm
    lam: Expr
    mu: Expr


@dataclass(frozen=True)
class ResidualReport:
    equations: dict  # (i, j) -> {"max": float, "rms": float}
    verdict: bool
    grid_n: int
    tol: float
    scale: float  # 1 + max |Ric| on the grid
    system: str

    @property
    def tol_effective(self) -> float:
        return self.tol * self.scale

    def max_residual(self, i: int, j: int) -> float:
        return self.equations[(i, j)]["max"]

    def worst(self):
        return max(self.equations, key=lambda ij: self.equations[ij]["max"])

    def to_dict(self) -> dict:
        return {
            "equations": {
                f"{i}{j}": dict(stats) for (i, j), stats in self.equations.items()
            },
            "verdict": self.verdict,
            "grid_n": self.grid_n,
            "tol": self.tol,
            "scale": self.scale,
            "tol_effective": self.tol_effective,
            "system": self.system,
        }


def lie_derivative_metric(m: DiagonalMetric, v: VectorField):
    """(Lie_V g)(E_i, E_j) as a symmetric 3x3 of trees.

    Assembled as E_i(V^j) + E_j(V^i) + sum_k V^k [g(nabla_{E_i}E_k, E_j)
    + g(E_i, nabla_{E_j}E_k)] from the connection table.
    """
    conn = connection_table(m)
    comp = v.components

    def entry(i: int, j: int) -> Expr:
        e = frame_derivative(m, comp[j - 1], i) + frame_derivative(m, comp[i - 1], j)
        for k in range(3):
            e = e + comp[k] * (conn[i - 1][k][j - 1] + conn[j - 1][k][i - 1])
        return e

    l11, l22, l33 = entry(1, 1), entry(2, 2), entry(3, 3)
    l12, l13, l23 = entry(1, 2), entry(1, 3), entry(2, 3)
    return ((l11, l12, l13), (l12, l22, l23), (l13, l23, l33))


def residual_equations(s: SolitonData) -> dict:
    """The six general-system residual trees, keyed by (i, j)."""
    lie = lie_derivative_metric(s.metric, s.V)
    ric = ricci_frame(s.metric)
    half = Const(0.5)
    out = {}
    for i, j in EQUATION_INDEX:
        e = half * lie[i - 1][j - 1] + ric.entry(i, j) + s.mu * s.eta[i] * s.eta[j]
        if i == j:
            e = e + s.lam
        out[(i, j)] = e
    return out


def _is_pinned(e: Expr, value: float, pts: np.ndarray) -> bool:
    # "Exactly": the expression must reproduce the constant to the last bit.
    return bool(np.all(eval_many(e, pts) == value))


def _specialized_equations(s: SolitonData, which: str) -> dict:
    sf = structure_functions(s.metric)
    ric = ricci_frame(s.metric)
    half = Const(0.5)
    zero = Const(0.0)
    v1, v2, v3 = s.V.components
    n1, n2, n3 = s.eta.components
    lam, mu = s.lam, s.mu
    m = s.metric

    if which == "v3":
        # V = d/dx3: the Lie term collapses to (-2b, -2d, 0) on the diagonal.
        return {
            (1, 1): -sf.b + ric.entry(1, 1) + lam + mu * n1 * n1,
            (2, 2): -sf.d + ric.entry(2, 2) + lam + mu * n2 * n2,
            (3, 3): ric.entry(3, 3) + lam + mu * n3 * n3,
            (1, 2): mu * n1 * n2,
            (1, 3): ric.entry(1, 3) + mu * n1 * n3,
            (2, 3): ric.entry(2, 3) + mu * n2 * n3,
        }
    if which == "eta3":
        return {
            (1, 1): frame_derivative(m, v1, 1) - sf.a * v2 - sf.b * v3
            + ric.entry(1, 1) + lam,
            (2, 2): frame_derivative(m, v2, 2) - sf.c * v1 - sf.d * v3
            + ric.entry(2, 2) + lam,
            (3, 3): frame_derivative(m, v3, 3) + ric.entry(3, 3) + lam + mu,
            (1, 2): half
            * (
                frame_derivative(m, v2, 1)
                + frame_derivative(m, v1, 2)
                + sf.a * v1
                + sf.c * v2
            ),
            (1, 3): half
            * (frame_derivative(m, v3, 1) + frame_derivative(m, v1, 3) + sf.b * v1)
            + ric.entry(1, 3),
            (2, 3): half
            * (frame_derivative(m, v3, 2) + frame_derivative(m, v2, 3) + sf.d * v2)
            + ric.entry(2, 3),
        }
    if which == "both":
        return {
            (1, 1): -sf.b + ric.entry(1, 1) + lam,
            (2, 2): -sf.d + ric.entry(2, 2) + lam,
            (3, 3): ric.entry(3, 3) + lam + mu,
            (1, 2): zero,
            (1, 3): ric.entry(1, 3),
            (2, 3): ric.entry(2, 3),
        }
    raise ValueError(f"unknown specialization {which!r} (use 'v3', 'eta3' or 'both')")


def _evaluate_system(s: SolitonData, equations: dict, grid_n: int, tol: float,
                     system: str) -> ResidualReport:
    pts = sample_grid(s.metric.domain, grid_n)
    check_metric_on_grid(s.metric, pts)
    _warn_degenerate_mu(s, pts)
    ric = ricci_frame(s.metric)
    ric_sup = 0.0
    for i, j in EQUATION_INDEX:
        ric_sup = max(ric_sup, float(np.abs(eval_many(ric.entry(i, j), pts)).max()))
    scale = 1.0 + ric_sup
    stats = {}
    for ij, e in equations.items():
        vals = eval_many(e, pts)
        stats[ij] = {
            "max": float(np.abs(vals).max()),
            "rms": float(np.sqrt(np.mean(vals * vals))),
        }
    verdict = all(v["max"] < tol * scale for v in stats.values())
    return ResidualReport(stats, verdict, grid_n, tol, scale, system)


def _warn_degenerate_mu(s: SolitonData, pts: np.ndarray) -> None:
    eta_sup = max(
        float(np.abs(eval_many(c, pts)).max()) for c in s.eta.components
    )
    if eta_sup <= 1e-12:
        return
    mu_sup = float(np.abs(eval_many(s.mu, pts)).max())
    if mu_sup <= 1e-12:
        warnings.warn(
            "eta is nonzero but mu vanishes on the grid; the eta-Ricci soliton "
            "convention expects mu != 0",
            SolitonConventionWarning,
            stacklevel=3,
        )


def residual(
    s: SolitonData,
    grid_n: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL_SOLITON,
) -> ResidualReport:
    """Evaluate the six general-system equations over the sampling grid.

    Reported residuals are raw; the pass/fail threshold is tol * (1 + max|Ric|)
    so that large-curvature boxes are not penalized.
    """
    return _evaluate_system(s, residual_equations(s), grid_n, tol, "general")


def residual_specialized(
    s: SolitonData,
    which: str,
    grid_n: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL_SOLITON,
) -> ResidualReport:
    """Evaluate the pinned system ('v3', 'eta3' or 'both').

    Preconditions: 'v3' needs frame V = (0,0,1), 'eta3' needs frame
    eta = (0,0,1), 'both' needs both; the pinned components must match
    exactly on the grid.
    """
    pts = sample_grid(s.metric.domain, grid_n)
    which = which.lower()
    if which in ("v3", "both"):
        for comp, val in zip(s.V.components, (0.0, 0.0, 1.0)):
            if not _is_pinned(comp, val, pts):
                raise PinnedComponentError(
                    f"V must equal (0,0,1) in the frame basis; component "
                    f"{to_text(comp)} != {val}"
                )
    if which in ("eta3", "both"):
        for comp, val in zip(s.eta.components, (0.0, 0.0, 1.0)):
            if not _is_pinned(comp, val, pts):
                raise PinnedComponentError(
                    f"eta must equal (0,0,1) in the frame basis; component "
                    f"{to_text(comp)} != {val}"
                )
    return _evaluate_system(s, _specialized_equations(s, which), grid_n, tol, which)


def is_killing(
    m: DiagonalMetric,
    v: VectorField,
    grid_n: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL_SOLITON,
) -> tuple[bool, float]:
    """Whether Lie_V g vanishes on the grid; returns (verdict, sup norm)."""
    pts = sample_grid(m.domain, grid_n)
    check_metric_on_grid(m, pts)
    lie = lie_derivative_metric(m, v)
    sup = 0.0
    for i, j in EQUATION_INDEX:
        sup = max(sup, float(np.abs(eval_many(lie[i - 1][j - 1], pts)).max()))
    return sup < tol, sup


def soliton_kind(s: SolitonData, grid_n: int = DEFAULT_GRID) -> SolitonKind:
    """Classify by the sign of a grid-constant lambda (threshold 1e-10)."""
    pts = sample_grid(s.metric.domain, grid_n)
    vals = eval_many(s.lam, pts)
    if not grid_constant(vals):
        return SolitonKind.NON_CONSTANT
    value = float(vals.mean())
    if abs(value) < 1e-10:
        return SolitonKind.STEADY
    return SolitonKind.SHRINKING if value < 0 else SolitonKind.EXPANDING


# ---------------------------------------------------------------------------
# Coordinate finite-difference Lie derivative oracle
# ---------------------------------------------------------------------------


def lie_derivative_fd_oracle(
    m: DiagonalMetric,
    v: VectorField,
    p,
    flow_step: float = 1e-6,
    space_step: float = 1e-5,
) -> np.ndarray:
    """(Lie_V g)(E_i,E_j) at p by transporting g along an Euler flow step.

    phi(x) = x + t V(x); the pullback (phi* g)(p) is differenced against g(p)
    to first order in t. Independent of the symbolic connection path; accuracy
    is O(t) plus differencing noise, comfortably inside 1e-4 for t = 1e-6.
    """
    p = np.asarray(p, dtype=float)
    coord = to_coordinate_components(v, m)

    def metric_at(q):
        f1 = evaluate(m.f1, q)
        f2 = evaluate(m.f2, q)
        return np.diag([1.0 / (f1 * f1), 1.0 / (f2 * f2), 1.0])

    v_p = np.array([evaluate(c, p) for c in coord])
    jac = np.eye(3)
    for col in range(3):
        hi = p.copy()
        lo = p.copy()
        hi[col] += space_step
        lo[col] -= space_step
        for row in range(3):
            dv = (evaluate(coord[row], hi) - evaluate(coord[row], lo)) / (
                2.0 * space_step
            )
            jac[row, col] += flow_step * dv
    pulled = jac.T @ metric_at(p + flow_step * v_p) @ jac
    lie_coord = (pulled - metric_at(p)) / flow_step
    scale = np.array([evaluate(m.f1, p), evaluate(m.f2, p), 1.0])
    return lie_coord * np.outer(scale, scale)


# ---------------------------------------------------------------------------
# Soliton spec files
# ---------------------------------------------------------------------------


def _field_from_dict(raw, m: DiagonalMetric, kind: str):
    if not isinstance(raw, dict) or "components" not in raw:
        raise MetricError(f"{kind} must be an object with basis and components")
    basis = raw.get("basis", "frame")
    comps = raw["components"]
    if not isinstance(comps, (list, tuple)) or len(comps) != 3:
        raise MetricError(f"{kind} components must be a list of three expressions")
    try:
        exprs = tuple(parse_expr(str(c)) for c in comps)
    except ValueError as exc:
        raise MetricError(f"bad {kind} component: {exc}") from exc
    if basis == "frame":
        return VectorField(exprs) if kind == "V" else OneForm(exprs)
    if basis == "coordinate":
        if kind == "V":
            return vector_from_coordinates(exprs, m)
        return oneform_from_coordinates(exprs, m)
    raise MetricError(f"{kind} basis must be 'frame' or 'coordinate', got {basis!r}")


def soliton_from_dict(data: dict) -> SolitonData:
    if not isinstance(data, dict) or "metric" not in data:
        raise MetricError("soliton spec must contain a metric object")
    m = metric_from_dict(data["metric"])
    v = _field_from_dict(data.get("V"), m, "V")
    eta = _field_from_dict(data.get("eta"), m, "eta")
    try:
        lam = parse_expr(str(data.get("lambda", "0")))
        mu = parse_expr(str(data.get("mu", "0")))
    except ValueError as exc:
        raise MetricError(f"bad lambda/mu: {exc}") from exc
    return SolitonData(m, v, eta, lam, mu)


def soliton_to_dict(s: SolitonData) -> dict:
    return {
        "metric": metric_to_dict(s.metric),
        "V": {
            "basis": "frame",
            "components": [to_text(c) for c in s.V.components],
        },
        "eta": {
            "basis": "frame",
            "components": [to_text(c) for c in s.eta.components],
        },
        "lambda": to_text(s.lam),
        "mu": to_text(s.mu),
    }


def load_soliton(path) -> SolitonData:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MetricError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return soliton_from_dict(data)
    except MetricError as exc:
        raise MetricError(f"{path}: {exc}") from exc


def save_soliton(s: SolitonData, path) -> None:
    Path(path).write_text(json.dumps(soliton_to_dict(s), indent=2, sort_keys=True) + "\n")
