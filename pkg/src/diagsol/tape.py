"""Flattening of expression trees into postfix instruction tapes.

Grid sweeps (curvature tables, flatness sups, soliton residuals) evaluate the
same tree at hundreds of points; a tape run by the compiled kernel (or the
numpy fallback) replaces the per-point recursive walk. Opaque antiderivative
nodes are lifted out as extra input columns, precomputed once per distinct
abscissa.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from . import expressions as ex

# Opcode table shared with both kernels (arg meaning in parentheses).
OP_CONST = 0  # (constant index)
OP_VAR = 1  # (axis, 0-based)
OP_INPUT = 2  # (input column)
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_NEG = 7
OP_POWI = 8  # (integer exponent)
OP_EXP = 9
OP_LN = 10
OP_SQRT = 11

# Error statuses reported by the kernels.
STATUS_OK = 0
STATUS_DIV_ZERO = 1
STATUS_POW_DOMAIN = 2
STATUS_EXP_RANGE = 3
STATUS_LN_DOMAIN = 4
STATUS_SQRT_DOMAIN = 5

_STATUS_MESSAGES = {
    STATUS_DIV_ZERO: "division by zero",
    STATUS_POW_DOMAIN: "zero raised to a negative power",
    STATUS_EXP_RANGE: "overflow in exp",
    STATUS_LN_DOMAIN: "ln of a non-positive value",
    STATUS_SQRT_DOMAIN: "sqrt of a negative value",
}


@dataclass(frozen=True)
class Tape:
    code: np.ndarray  # (n_ops, 2) int32: opcode, argument
    consts: np.ndarray  # float64 constant pool
    inputs: tuple  # Antideriv nodes feeding the input columns
    stack_need: int


@lru_cache(maxsize=512)
def compile_tape(e: ex.Expr) -> Tape:
    """Postorder-flatten a tree into a stack-machine program."""
    code: list[tuple[int, int]] = []
    consts: list[float] = []
    const_ix: dict[float, int] = {}
    inputs: list[ex.Antideriv] = []
    input_ix: dict[ex.Antideriv, int] = {}
    depth = 0
    max_depth = 0

    def emit(op: int, arg: int, delta: int):
        nonlocal depth, max_depth
        code.append((op, arg))
        depth += delta
        max_depth = max(max_depth, depth)

    work: list[tuple[ex.Expr, bool]] = [(e, False)]
    while work:
        node, ready = work.pop()
        if not ready:
            if isinstance(node, (ex.Const, ex.Var, ex.Antideriv)):
                work.append((node, True))
            elif isinstance(node, (ex.Add, ex.Sub, ex.Mul, ex.Div)):
                work.append((node, True))
                work.append((node.right, False))
                work.append((node.left, False))
            elif isinstance(node, (ex.Neg, ex.Exp, ex.Ln, ex.Sqrt)):
                work.append((node, True))
                work.append((node.arg, False))
            elif isinstance(node, ex.Pow):
                work.append((node, True))
                work.append((node.base, False))
            else:
                raise TypeError(f"unknown expression node {type(node).__name__}")
            continue
        if isinstance(node, ex.Const):
            ix = const_ix.setdefault(node.value, len(consts))
            if ix == len(consts):
                consts.append(node.value)
            emit(OP_CONST, ix, +1)
        elif isinstance(node, ex.Var):
            emit(OP_VAR, node.axis - 1, +1)
        elif isinstance(node, ex.Antideriv):
            ix = input_ix.setdefault(node, len(inputs))
            if ix == len(inputs):
                inputs.append(node)
            emit(OP_INPUT, ix, +1)
        elif isinstance(node, ex.Add):
            emit(OP_ADD, 0, -1)
        elif isinstance(node, ex.Sub):
            emit(OP_SUB, 0, -1)
        elif isinstance(node, ex.Mul):
            emit(OP_MUL, 0, -1)
        elif isinstance(node, ex.Div):
            emit(OP_DIV, 0, -1)
        elif isinstance(node, ex.Neg):
            emit(OP_NEG, 0, 0)
        elif isinstance(node, ex.Pow):
            emit(OP_POWI, node.exponent, 0)
        elif isinstance(node, ex.Exp):
            emit(OP_EXP, 0, 0)
        elif isinstance(node, ex.Ln):
            emit(OP_LN, 0, 0)
        elif isinstance(node, ex.Sqrt):
            emit(OP_SQRT, 0, 0)

    return Tape(
        code=np.asarray(code, dtype=np.int32).reshape(-1, 2),
        consts=np.asarray(consts, dtype=np.float64),
        inputs=tuple(inputs),
        stack_need=max(max_depth, 1),
    )


def _input_columns(tape: Tape, pts: np.ndarray) -> np.ndarray:
    cols = np.empty((len(tape.inputs), pts.shape[0]), dtype=np.float64)
    for k, node in enumerate(tape.inputs):
        axis_vals = pts[:, node.axis - 1]
        uniq, inverse = np.unique(axis_vals, return_inverse=True)
        vals = np.array([ex._antideriv_value(node, t) for t in uniq])
        cols[k] = vals[inverse]
    return cols


def eval_many(e: ex.Expr, pts) -> np.ndarray:
    """Evaluate a tree at many points at once.

    pts is array-like of shape (n, 3); returns shape (n,). Domain failures
    raise the same DomainError the scalar evaluator produces, located at the
    first offending point.
    """
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("pts must have shape (n, 3)")
    if pts.shape[0] == 0:
        return np.empty(0, dtype=np.float64)
    tape = compile_tape(e)
    xs = np.ascontiguousarray(pts.T)
    inputs = _input_columns(tape, pts)
    status, _op_i, pt_i, out = _backend.run_tape(
        tape.code, tape.consts, xs, inputs, tape.stack_need
    )
    if status != STATUS_OK:
        point = tuple(pts[pt_i])
        # Re-run the scalar evaluator at the bad point for a precise message.
        ex.evaluate(e, point)
        raise ex.DomainError(_STATUS_MESSAGES.get(status, "evaluation error"), e, point)
    return out


def grid_values(exprs, pts) -> np.ndarray:
    """Stacked eval_many for an iterable of trees; shape (len(exprs), n)."""
    return np.stack([eval_many(e, pts) for e in exprs])


def backend_name() -> str:
    """Which evaluation backend is active ('compiled' or 'python')."""
    return _backend.backend_name()
