"""Diagonal metrics g = f1^-2 dx1^2 + f2^-2 dx2^2 + dx3^2 on a box in R^3.

Houses the orthonormal frame E1 = f1 d/dx1, E2 = f2 d/dx2, E3 = d/dx3, the
four structure functions a, b, c, d (all curvature formulas are polynomial in
them and their frame derivatives), Lie-bracket coefficients, the syntactic
dependency-case classification, and frame/coordinate component conversion for
vector fields and one-forms.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .expressions import (
    Const,
    DomainBox,
    Expr,
    as_expr,
    diff,
    free_axes,
    parse_expr,
    to_text,
)
from .tape import eval_many


class MetricError(ValueError):
    """Invalid metric data: bad spec file, or f1/f2 vanishing on the grid."""


# Profile functions smaller than this on the sampling grid count as zero.
NONZERO_TOL = 1e-12

# Grid decisions: "constant" and "nowhere zero" per the sampling philosophy.
CONSTANT_RTOL = 1e-10
ZERO_TOL = 1e-10


class CaseTag(enum.Enum):
    """Dependency pattern of (f1, f2), decided purely from free axes.

    Constants match every single-axis pattern; the declaration order below is
    the priority order, which makes classification deterministic.
    """

    SEP = "sep"  # f1(x1), f2(x2)
    BOTH3 = "both3"  # f1(x3), f2(x3)
    X1X3 = "x1x3"  # f1(x1), f2(x3)
    BOTH2 = "both2"  # f1(x2), f2(x2)
    X2X1 = "x2x1"  # f1(x2), f2(x1)
    X2X3 = "x2x3"  # f1(x2), f2(x3)
    GENERAL = "general"


_CASE_PATTERNS = (
    (CaseTag.SEP, frozenset((1,)), frozenset((2,))),
    (CaseTag.BOTH3, frozenset((3,)), frozenset((3,))),
    (CaseTag.X1X3, frozenset((1,)), frozenset((3,))),
    (CaseTag.BOTH2, frozenset((2,)), frozenset((2,))),
    (CaseTag.X2X1, frozenset((2,)), frozenset((1,))),
    (CaseTag.X2X3, frozenset((2,)), frozenset((3,))),
)

# Axis along which f1 resp. f2 varies in each single-variable case.
CASE_AXES = {
    CaseTag.SEP: (1, 2),
    CaseTag.BOTH3: (3, 3),
    CaseTag.X1X3: (1, 3),
    CaseTag.BOTH2: (2, 2),
    CaseTag.X2X1: (2, 1),
    CaseTag.X2X3: (2, 3),
}


@dataclass(frozen=True)
class DiagonalMetric:
    f1: Expr
    f2: Expr
    domain: DomainBox


@dataclass(frozen=True)
class StructureFunctions:
    a: Expr  # (f2/f1) * d f1 / dx2
    b: Expr  # (1/f1) * d f1 / dx3
    c: Expr  # (f1/f2) * d f2 / dx1
    d: Expr  # (1/f2) * d f2 / dx3


@dataclass(frozen=True)
class VectorField:
    """Frame components: V = V1 E1 + V2 E2 + V3 E3."""

    components: tuple[Expr, Expr, Expr]

    def __getitem__(self, k: int) -> Expr:
        return self.components[k - 1]


@dataclass(frozen=True)
class OneForm:
    """Frame components against the dual coframe e1, e2, e3."""

    components: tuple[Expr, Expr, Expr]

    def __getitem__(self, k: int) -> Expr:
        return self.components[k - 1]


def structure_functions(m: DiagonalMetric) -> StructureFunctions:
    return StructureFunctions(
        a=(m.f2 / m.f1) * diff(m.f1, 2),
        b=diff(m.f1, 3) / m.f1,
        c=(m.f1 / m.f2) * diff(m.f2, 1),
        d=diff(m.f2, 3) / m.f2,
    )


def frame_derivative(m: DiagonalMetric, h: Expr, i: int) -> Expr:
    """E_i(h): the derivative of h along the i-th orthonormal frame field."""
    if i == 1:
        return m.f1 * diff(h, 1)
    if i == 2:
        return m.f2 * diff(h, 2)
    if i == 3:
        return diff(h, 3)
    raise ValueError(f"frame index must be 1, 2 or 3, got {i}")


def lie_bracket_table(m: DiagonalMetric) -> dict:
    """Frame coefficients of [E1,E2], [E1,E3], [E2,E3].

    [E1,E2] = -a E1 + c E2, [E1,E3] = -b E1, [E2,E3] = -d E2.
    """
    s = structure_functions(m)
    zero = Const(0.0)
    return {
        (1, 2): (-s.a, s.c, zero),
        (1, 3): (-s.b, zero, zero),
        (2, 3): (zero, -s.d, zero),
    }


def classify(m: DiagonalMetric) -> CaseTag:
    ax1, ax2 = free_axes(m.f1), free_axes(m.f2)
    for tag, p1, p2 in _CASE_PATTERNS:
        if ax1 <= p1 and ax2 <= p2:
            return tag
    return CaseTag.GENERAL


def to_coordinate_components(v: VectorField, m: DiagonalMetric):
    """Components against d/dx1, d/dx2, d/dx3: (V1 f1, V2 f2, V3)."""
    v1, v2, v3 = v.components
    return (v1 * m.f1, v2 * m.f2, v3)


def vector_from_coordinates(components, m: DiagonalMetric) -> VectorField:
    """Frame components of a vector field given against d/dx^i."""
    w1, w2, w3 = (as_expr(c) for c in components)
    return VectorField((w1 / m.f1, w2 / m.f2, w3))


def oneform_from_coordinates(components, m: DiagonalMetric) -> OneForm:
    """Frame components of a one-form given against dx^i: (w1 f1, w2 f2, w3)."""
    w1, w2, w3 = (as_expr(c) for c in components)
    return OneForm((w1 * m.f1, w2 * m.f2, w3))


def eta_dx3() -> OneForm:
    """The one-form dx3 in frame components."""
    return OneForm((Const(0.0), Const(0.0), Const(1.0)))


def unit_v3() -> VectorField:
    """The coordinate field d/dx3 in frame components."""
    return VectorField((Const(0.0), Const(0.0), Const(1.0)))


# ---------------------------------------------------------------------------
# Sampling grid
# ---------------------------------------------------------------------------


def axis_points(lo: float, hi: float, n: int) -> np.ndarray:
    """n equispaced interior points, endpoints excluded by half a spacing."""
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5)


def sample_grid(box: DomainBox, n: int = 9) -> np.ndarray:
    """Tensor-product interior grid, shape (n^3, 3)."""
    if n < 3:
        raise ValueError("grid size must be at least 3 per axis")
    axes = [axis_points(*box.interval(k), n) for k in (1, 2, 3)]
    g1, g2, g3 = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g1.ravel(), g2.ravel(), g3.ravel()])


def check_metric_on_grid(m: DiagonalMetric, pts: np.ndarray) -> None:
    """Hard error if f1 or f2 is (numerically) zero at a sampled point."""
    for name, f in (("f1", m.f1), ("f2", m.f2)):
        values = eval_many(f, pts)
        worst = np.argmin(np.abs(values))
        if abs(values[worst]) <= NONZERO_TOL:
            raise MetricError(
                f"{name} = {to_text(f)} vanishes on the sampling grid "
                f"(|{name}| = {abs(values[worst]):.2e} at {tuple(pts[worst])!r})"
            )


def grid_constant(values: np.ndarray, rtol: float = CONSTANT_RTOL) -> bool:
    """Grid decision for 'is constant': spread below rtol*(1 + max |.|)."""
    values = np.asarray(values)
    return float(values.max() - values.min()) < rtol * (1.0 + float(np.abs(values).max()))


def grid_nonzero(values: np.ndarray, tol: float = ZERO_TOL) -> bool:
    """Grid decision for 'nowhere zero': min |.| above tol."""
    return float(np.abs(np.asarray(values)).min()) > tol


# ---------------------------------------------------------------------------
# Metric spec files
# ---------------------------------------------------------------------------


def _interval_from_json(raw, key: str) -> tuple[float, float]:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(v, (int, float)) for v in raw)
    ):
        raise MetricError(f"domain entry '{key}' must be a [lo, hi] pair")
    return float(raw[0]), float(raw[1])


def metric_from_dict(data: dict) -> DiagonalMetric:
    try:
        f1_text, f2_text, dom = data["f1"], data["f2"], data["domain"]
    except (KeyError, TypeError) as exc:
        raise MetricError(f"metric spec must contain f1, f2 and domain: {exc}") from exc
    try:
        f1 = parse_expr(str(f1_text))
        f2 = parse_expr(str(f2_text))
    except ValueError as exc:
        raise MetricError(f"bad profile function: {exc}") from exc
    if not isinstance(dom, dict):
        raise MetricError("domain must be an object with x1, x2, x3 intervals")
    try:
        box = DomainBox(
            _interval_from_json(dom.get("x1"), "x1"),
            _interval_from_json(dom.get("x2"), "x2"),
            _interval_from_json(dom.get("x3"), "x3"),
        )
    except ValueError as exc:
        raise MetricError(str(exc)) from exc
    return DiagonalMetric(f1, f2, box)


def metric_to_dict(m: DiagonalMetric) -> dict:
    return {
        "f1": to_text(m.f1),
        "f2": to_text(m.f2),
        "domain": {
            "x1": list(m.domain.x1),
            "x2": list(m.domain.x2),
            "x3": list(m.domain.x3),
        },
    }


def load_metric(path) -> DiagonalMetric:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MetricError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return metric_from_dict(data)
    except MetricError as exc:
        raise MetricError(f"{path}: {exc}") from exc


def save_metric(m: DiagonalMetric, path) -> None:
    Path(path).write_text(json.dumps(metric_to_dict(m), indent=2, sort_keys=True) + "\n")
