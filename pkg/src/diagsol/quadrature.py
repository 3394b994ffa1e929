"""Adaptive Simpson quadrature for smooth one-dimensional integrands."""

from __future__ import annotations

import math
from typing import Callable


class QuadratureError(ValueError):
    """Raised when adaptive quadrature fails to converge or hits a singularity."""


def _simpson(fa: float, fm: float, fb: float, a: float, b: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    if not (math.isfinite(flm) and math.isfinite(frm)):
        raise QuadratureError(f"integrand not finite inside [{a!r}, {b!r}]")
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    err = left + right - whole
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a!r}, {b!r}] "
            f"(residual {abs(err):.3e})"
        )
    half = 0.5 * tol
    return _recurse(f, a, m, fa, flm, fm, left, half, depth - 1) + _recurse(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 48,
) -> float:
    """Integrate f from a to b (signed) to absolute tolerance tol.

    The integrand must be finite on the interval; a non-finite sample or
    exhausted recursion depth raises QuadratureError.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    if not (math.isfinite(fa) and math.isfinite(fm) and math.isfinite(fb)):
        raise QuadratureError(f"integrand not finite on [{a!r}, {b!r}]")
    whole = _simpson(fa, fm, fb, a, b)
    return sign * _recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
