"""Shared fixtures: reference metrics and the seeded expression generator."""

from __future__ import annotations

import math

import numpy as np
import pytest

from diagsol import (
    Const,
    DiagonalMetric,
    DomainBox,
    DomainError,
    Var,
    diff,
    evaluate,
    parse_expr,
    unit_box,
)
from diagsol.expressions import Add, Div, Exp, Ln, Mul, Neg, Pow, Sqrt, Sub


@pytest.fixture
def sol3():
    return DiagonalMetric(parse_expr("exp(-x3)"), parse_expr("exp(x3)"), unit_box())


@pytest.fixture
def h2xr():
    return DiagonalMetric(
        parse_expr("x2"), parse_expr("x2"), DomainBox((-1, 1), (0.5, 2), (-1, 1))
    )


@pytest.fixture
def euclid():
    return DiagonalMetric(Const(1.0), Const(1.0), unit_box())


# ---------------------------------------------------------------------------
# Seeded random expression generator over the full grammar.
#
# Arguments of ln/sqrt and denominators are kept positive by construction
# (0.5 + (.)^2 style wrappers, which are themselves grammar trees), and exp
# arguments are damped, so generated trees evaluate on [-1, 1]^3. Triples are
# rejected unless the value, first and third derivatives stay below 1e4,
# which bounds both the truncation and round-off error of a central
# difference with step 1e-5 well under the 1e-6 relative tolerance.
# ---------------------------------------------------------------------------


def _positive_wrap(rng, sub):
    return Add(Const(round(0.5 + rng.uniform(0.0, 1.5), 3)), Mul(sub, sub))


def random_expr(rng: np.random.Generator, depth: int):
    if depth <= 0:
        if rng.uniform() < 0.4:
            return Const(round(rng.uniform(-2.0, 2.0), 3))
        return Var(int(rng.integers(1, 4)))
    kind = rng.choice(
        ["add", "sub", "mul", "div", "neg", "pow", "exp", "ln", "sqrt", "leaf"],
        p=[0.16, 0.14, 0.16, 0.08, 0.08, 0.08, 0.08, 0.06, 0.06, 0.10],
    )
    if kind == "leaf":
        return random_expr(rng, 0)
    if kind == "add":
        return Add(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "sub":
        return Sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "mul":
        return Mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "div":
        return Div(
            random_expr(rng, depth - 1), _positive_wrap(rng, random_expr(rng, depth - 2))
        )
    if kind == "neg":
        return Neg(random_expr(rng, depth - 1))
    if kind == "pow":
        n = int(rng.choice([-2, -1, 2, 3]))
        if n < 0:
            return Pow(_positive_wrap(rng, random_expr(rng, depth - 2)), n)
        return Pow(random_expr(rng, depth - 1), n)
    if kind == "exp":
        return Exp(Mul(Const(0.4), random_expr(rng, depth - 1)))
    if kind == "ln":
        return Ln(_positive_wrap(rng, random_expr(rng, depth - 2)))
    return Sqrt(_positive_wrap(rng, random_expr(rng, depth - 2)))


def random_triples(seed: int, count: int):
    """Deterministic (expr, axis, point) triples safe for FD comparison."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        e = random_expr(rng, depth=4)
        axis = int(rng.integers(1, 4))
        p = tuple(rng.uniform(-1.0, 1.0, 3))
        try:
            value = evaluate(e, p)
            d1 = diff(e, axis)
            d1v = evaluate(d1, p)
            d3v = evaluate(diff(diff(d1, axis), axis), p)
        except (DomainError, OverflowError):
            continue
        if not all(math.isfinite(v) for v in (value, d1v, d3v)):
            continue
        if max(abs(value), abs(d1v), abs(d3v)) > 1e4:
            continue
        out.append((e, axis, p))
    return out
