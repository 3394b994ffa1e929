"""Closed-form scalar expressions over the coordinates x1, x2, x3.

A small immutable expression language with exact symbolic differentiation
and pointwise numeric evaluation. Every scalar object handled by the rest
of the package (metric profile functions, potential components, soliton
functions lambda and mu) is one of these trees.

Grammar nodes: constants, the three coordinate variables, + - * / and
negation, integer powers, exp, ln, sqrt, and an opaque numeric
antiderivative node whose symbolic derivative is its integrand.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Iterable

from .quadrature import adaptive_simpson

Point = tuple[float, float, float]

_AXES = (1, 2, 3)


class ExpressionError(ValueError):
    """Base class for expression-level failures."""


class ParseError(ExpressionError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DomainError(ExpressionError):
    """Evaluation hit an undefined operation (1/0, ln(x<=0), sqrt(x<0), ...)."""

    def __init__(self, message: str, node: "Expr | None" = None, point=None):
        detail = message
        if node is not None:
            detail += f" in subexpression '{_short_text(node)}'"
        if point is not None:
            detail += f" at point {tuple(point)!r}"
        super().__init__(detail)
        self.node = node
        self.point = tuple(point) if point is not None else None


class Expr:
    """Base node. Instances are immutable and hashable; operators build trees."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("Pow exponent must be an integer")
        return Pow(self, exponent)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Var(Expr):
    axis: int

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"variable axis must be 1, 2 or 3, got {self.axis}")


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise ValueError("Pow exponent must be an integer")


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Ln(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Antideriv(Expr):
    """Numeric antiderivative of `integrand` along `axis`, zero at `ref`.

    The integrand must depend only on `axis`; the symbolic derivative along
    that axis is the integrand itself, so differentiation stays closed.
    Values are computed by adaptive Simpson quadrature and cached per node.
    """

    integrand: Expr
    axis: int
    ref: float

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"antiderivative axis must be 1, 2 or 3, got {self.axis}")
        extra = free_axes(self.integrand) - {self.axis}
        if extra:
            raise ValueError(
                f"antiderivative integrand may depend only on x{self.axis}, "
                f"found x{sorted(extra)[0]}"
            )
        object.__setattr__(self, "ref", float(self.ref))


ZERO = Const(0.0)
ONE = Const(1.0)
X1, X2, X3 = Var(1), Var(2), Var(3)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Const(float(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def exp(arg) -> Expr:
    return Exp(as_expr(arg))


def ln(arg) -> Expr:
    return Ln(as_expr(arg))


def sqrt(arg) -> Expr:
    return Sqrt(as_expr(arg))


# ---------------------------------------------------------------------------
# Domain box and points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainBox:
    """Rectangular domain I1 x I2 x I3, one closed interval per axis."""

    x1: tuple[float, float]
    x2: tuple[float, float]
    x3: tuple[float, float]

    def __post_init__(self):
        for axis, (lo, hi) in zip(_AXES, (self.x1, self.x2, self.x3)):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"degenerate interval for x{axis}: [{lo}, {hi}]")

    def interval(self, axis: int) -> tuple[float, float]:
        return (self.x1, self.x2, self.x3)[axis - 1]

    def contains(self, p: Iterable[float], margin: float = 0.0) -> bool:
        return all(
            self.interval(axis)[0] - margin <= x <= self.interval(axis)[1] + margin
            for axis, x in zip(_AXES, p)
        )


def unit_box(half_width: float = 1.0) -> DomainBox:
    """[-w, w]^3 convenience box."""
    iv = (-half_width, half_width)
    return DomainBox(iv, iv, iv)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(e: Expr, p: Iterable[float]) -> float:
    """IEEE double evaluation of the tree at point p = (x1, x2, x3)."""
    x = tuple(float(v) for v in p)
    if len(x) != 3:
        raise ValueError("point must have three coordinates")
    return _eval(e, x)


def _eval(e: Expr, x: Point) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x[e.axis - 1]
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Div):
        den = _eval(e.right, x)
        if den == 0.0:
            raise DomainError("division by zero", e, x)
        return _eval(e.left, x) / den
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Pow):
        base = _eval(e.base, x)
        if base == 0.0 and e.exponent < 0:
            raise DomainError("zero raised to a negative power", e, x)
        return base**e.exponent
    if isinstance(e, Exp):
        v = _eval(e.arg, x)
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainError("overflow in exp", e, x) from None
    if isinstance(e, Ln):
        v = _eval(e.arg, x)
        if v <= 0.0:
            raise DomainError("ln of a non-positive value", e, x)
        return math.log(v)
    if isinstance(e, Sqrt):
        v = _eval(e.arg, x)
        if v < 0.0:
            raise DomainError("sqrt of a negative value", e, x)
        return math.sqrt(v)
    if isinstance(e, Antideriv):
        return _antideriv_value(e, x[e.axis - 1])
    raise TypeError(f"unknown expression node {type(e).__name__}")


# Antiderivative value cache: per node, maps abscissa -> (value, error budget).
# Chains from the nearest anchor; falls back to the reference point once the
# accumulated quadrature tolerance would exceed _ANTIDERIV_BUDGET.
_ANTIDERIV_TOL = 1e-12
_ANTIDERIV_BUDGET = 5e-11
_antideriv_caches: "weakref.WeakKeyDictionary[Antideriv, dict]" = (
    weakref.WeakKeyDictionary()
)


def _antideriv_value(node: Antideriv, t: float) -> float:
    cache = _antideriv_caches.get(node)
    if cache is None:
        cache = {node.ref: (0.0, 0.0)}
        _antideriv_caches[node] = cache
    hit = cache.get(t)
    if hit is not None:
        return hit[0]
    anchor = min(
        (a for a in cache if cache[a][1] + _ANTIDERIV_TOL <= _ANTIDERIV_BUDGET),
        key=lambda a: abs(a - t),
        default=node.ref,
    )
    base, err = cache[anchor]
    integrand = node.integrand
    axis = node.axis

    def f(s: float) -> float:
        pt = [0.0, 0.0, 0.0]
        pt[axis - 1] = s
        return _eval(integrand, tuple(pt))

    value = base + adaptive_simpson(f, anchor, t, tol=_ANTIDERIV_TOL)
    cache[t] = (value, err + _ANTIDERIV_TOL)
    return value


# ---------------------------------------------------------------------------
# Differentiation and structure queries
# ---------------------------------------------------------------------------


def diff(e: Expr, axis: int) -> Expr:
    """Exact symbolic partial derivative; no simplification is performed."""
    if axis not in _AXES:
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    return _diff(e, axis)


def _diff(e: Expr, axis: int) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.axis == axis else ZERO
    if isinstance(e, Add):
        return Add(_diff(e.left, axis), _diff(e.right, axis))
    if isinstance(e, Sub):
        return Sub(_diff(e.left, axis), _diff(e.right, axis))
    if isinstance(e, Mul):
        return Add(
            Mul(_diff(e.left, axis), e.right), Mul(e.left, _diff(e.right, axis))
        )
    if isinstance(e, Div):
        num = Sub(
            Mul(_diff(e.left, axis), e.right), Mul(e.left, _diff(e.right, axis))
        )
        return Div(num, Pow(e.right, 2))
    if isinstance(e, Neg):
        return Neg(_diff(e.arg, axis))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return ZERO
        factor = Mul(Const(float(e.exponent)), Pow(e.base, e.exponent - 1))
        return Mul(factor, _diff(e.base, axis))
    if isinstance(e, Exp):
        return Mul(e, _diff(e.arg, axis))
    if isinstance(e, Ln):
        return Div(_diff(e.arg, axis), e.arg)
    if isinstance(e, Sqrt):
        return Div(_diff(e.arg, axis), Mul(Const(2.0), e))
    if isinstance(e, Antideriv):
        return e.integrand if axis == e.axis else ZERO
    raise TypeError(f"unknown expression node {type(e).__name__}")


def free_axes(e: Expr) -> frozenset[int]:
    """Set of coordinate axes appearing in the tree (purely syntactic)."""
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.axis,))
    if isinstance(e, (Add, Sub, Mul, Div)):
        return free_axes(e.left) | free_axes(e.right)
    if isinstance(e, (Neg, Exp, Ln, Sqrt)):
        return free_axes(e.arg)
    if isinstance(e, Pow):
        return free_axes(e.base)
    if isinstance(e, Antideriv):
        return frozenset((e.axis,))
    raise TypeError(f"unknown expression node {type(e).__name__}")


def finite_difference(
    e: Expr,
    axis: int,
    p: Iterable[float],
    step: float = 1e-5,
    box: DomainBox | None = None,
) -> float:
    """Central difference (e(p+h) - e(p-h)) / (2h) along the given axis."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    x = tuple(float(v) for v in p)
    hi = list(x)
    lo = list(x)
    hi[axis - 1] += step
    lo[axis - 1] -= step
    if box is not None and not (box.contains(hi) and box.contains(lo)):
        raise DomainError(
            "finite-difference stencil leaves the domain box", point=x
        )
    return (_eval(e, tuple(hi)) - _eval(e, tuple(lo))) / (2.0 * step)


def finite_difference2(
    e: Expr,
    axis: int,
    p: Iterable[float],
    outer_step: float = 1e-4,
    inner_step: float = 1e-5,
    box: DomainBox | None = None,
) -> float:
    """Second derivative via nested central differencing."""
    x = tuple(float(v) for v in p)
    hi = list(x)
    lo = list(x)
    hi[axis - 1] += outer_step
    lo[axis - 1] -= outer_step
    up = finite_difference(e, axis, tuple(hi), inner_step, box)
    dn = finite_difference(e, axis, tuple(lo), inner_step, box)
    return (up - dn) / (2.0 * outer_step)


class AntiderivativeFn:
    """Callable antiderivative F with F(ref) = 0 and F' = integrand.

    `node` is the expression-tree form, usable wherever an Expr is expected
    (e.g. inside potential vector field components).
    """

    def __init__(self, node: Antideriv):
        self.node = node

    @property
    def integrand(self) -> Expr:
        return self.node.integrand

    @property
    def ref(self) -> float:
        return self.node.ref

    def __call__(self, t: float) -> float:
        return _antideriv_value(self.node, float(t))


def antiderivative_numeric(e: Expr, axis: int, ref: float = 0.0) -> AntiderivativeFn:
    """Antiderivative of a single-axis expression, computed by quadrature.

    The integrand must depend only on `axis` and be continuous on the range
    of use; evaluation accuracy is better than 1e-10 on ordinary intervals.
    """
    return AntiderivativeFn(Antideriv(as_expr(e), axis, ref))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_FUNCTIONS = {"exp": Exp, "ln": Ln, "sqrt": Sqrt}


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str, offset: int | None = None):
        raise ParseError(message, self.pos if offset is None else offset)

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1

    def match(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def read_number(self) -> float:
        self.skip_ws()
        start = self.pos
        text = self.text
        n = len(text)
        while self.pos < n and text[self.pos].isdigit():
            self.pos += 1
        if self.pos < n and text[self.pos] == ".":
            self.pos += 1
            while self.pos < n and text[self.pos].isdigit():
                self.pos += 1
        if self.pos == start or text[start : self.pos] == ".":
            self.error("expected a number", start)
        if self.pos < n and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < n and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < n and text[self.pos].isdigit():
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark
        return float(text[start : self.pos])

    def read_ident(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        text = self.text
        while self.pos < len(text) and (
            text[self.pos].isalnum() or text[self.pos] == "_"
        ):
            self.pos += 1
        return text[start : self.pos], start


def parse_expr(text: str) -> Expr:
    """Parse infix expression text into a tree.

    Syntax: x1, x2, x3, numeric literals, + - * /, integer powers with ^
    (binding tighter than unary minus), exp(...), ln(...), sqrt(...),
    antideriv(integrand, xi, ref), and parentheses.
    """
    tok = _Tokenizer(text)
    e = _parse_sum(tok)
    tok.skip_ws()
    if tok.pos != len(text):
        tok.error(f"unexpected trailing input '{text[tok.pos:]}'")
    return e


def _parse_sum(tok: _Tokenizer) -> Expr:
    e = _parse_product(tok)
    while True:
        if tok.match("+"):
            e = Add(e, _parse_product(tok))
        elif tok.match("-"):
            e = Sub(e, _parse_product(tok))
        else:
            return e


def _parse_product(tok: _Tokenizer) -> Expr:
    e = _parse_unary(tok)
    while True:
        if tok.match("*"):
            e = Mul(e, _parse_unary(tok))
        elif tok.match("/"):
            e = Div(e, _parse_unary(tok))
        else:
            return e


def _parse_unary(tok: _Tokenizer) -> Expr:
    if tok.match("-"):
        return Neg(_parse_unary(tok))
    return _parse_power(tok)


def _parse_power(tok: _Tokenizer) -> Expr:
    base = _parse_atom(tok)
    if tok.match("^"):
        return Pow(base, _parse_int_exponent(tok))
    return base


def _parse_int_exponent(tok: _Tokenizer) -> int:
    paren = tok.match("(")
    sign = -1 if tok.match("-") else 1
    start = tok.pos
    value = tok.read_number()
    if value != int(value):
        tok.error("power exponent must be an integer", start)
    if paren:
        tok.expect(")")
    return sign * int(value)


def _parse_signed_number(tok: _Tokenizer) -> float:
    sign = -1.0 if tok.match("-") else 1.0
    return sign * tok.read_number()


def _parse_atom(tok: _Tokenizer) -> Expr:
    ch = tok.peek()
    if ch == "(":
        tok.pos += 1
        e = _parse_sum(tok)
        tok.expect(")")
        return e
    if ch.isdigit() or ch == ".":
        return Const(tok.read_number())
    if ch.isalpha() or ch == "_":
        name, start = tok.read_ident()
        if name in ("x1", "x2", "x3"):
            return Var(int(name[1]))
        if name in _FUNCTIONS:
            tok.expect("(")
            arg = _parse_sum(tok)
            tok.expect(")")
            return _FUNCTIONS[name](arg)
        if name == "antideriv":
            tok.expect("(")
            integrand = _parse_sum(tok)
            tok.expect(",")
            axis_name, axis_at = tok.read_ident()
            if axis_name not in ("x1", "x2", "x3"):
                tok.error("antideriv axis must be x1, x2 or x3", axis_at)
            tok.expect(",")
            ref = _parse_signed_number(tok)
            tok.expect(")")
            try:
                return Antideriv(integrand, int(axis_name[1]), ref)
            except ValueError as exc:
                tok.error(str(exc), start)
        tok.error(f"unknown identifier '{name}'", start)
    if ch == "":
        tok.error("unexpected end of input")
    tok.error(f"unexpected character '{ch}'")


# ---------------------------------------------------------------------------
# Rendering (parseable text, used for serialization and error messages)
# ---------------------------------------------------------------------------

_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_SUM
    if isinstance(e, (Mul, Div)):
        return _PREC_PROD
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, Const) and math.copysign(1.0, e.value) < 0:
        # covers -0.0, whose text also starts with a unary minus
        return _PREC_UNARY
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _render(e: Expr, parent_prec: int) -> str:
    prec = _prec(e)
    if isinstance(e, Const):
        text = repr(e.value)
        text = text[:-2] if text.endswith(".0") else text
    elif isinstance(e, Var):
        text = f"x{e.axis}"
    elif isinstance(e, Add):
        text = f"{_render(e.left, prec)} + {_render(e.right, prec + 1)}"
    elif isinstance(e, Sub):
        text = f"{_render(e.left, prec)} - {_render(e.right, prec + 1)}"
    elif isinstance(e, Mul):
        text = f"{_render(e.left, prec)}*{_render(e.right, prec + 1)}"
    elif isinstance(e, Div):
        text = f"{_render(e.left, prec)}/{_render(e.right, prec + 1)}"
    elif isinstance(e, Neg):
        text = f"-{_render(e.arg, prec + 1)}"
    elif isinstance(e, Pow):
        exp_text = (
            str(e.exponent) if e.exponent >= 0 else f"(-{abs(e.exponent)})"
        )
        text = f"{_render(e.base, _PREC_ATOM)}^{exp_text}"
    elif isinstance(e, Exp):
        text = f"exp({_render(e.arg, 0)})"
    elif isinstance(e, Ln):
        text = f"ln({_render(e.arg, 0)})"
    elif isinstance(e, Sqrt):
        text = f"sqrt({_render(e.arg, 0)})"
    elif isinstance(e, Antideriv):
        ref = repr(e.ref)
        ref = ref[:-2] if ref.endswith(".0") else ref
        text = f"antideriv({_render(e.integrand, 0)}, x{e.axis}, {ref})"
    else:
        raise TypeError(f"unknown expression node {type(e).__name__}")
    if prec < parent_prec:
        return f"({text})"
    return text


def to_text(e: Expr) -> str:
    """Render a tree as parseable expression text."""
    return _render(e, 0)


def _short_text(e: Expr, limit: int = 80) -> str:
    text = to_text(e)
    return text if len(text) <= limit else text[: limit - 3] + "..."
