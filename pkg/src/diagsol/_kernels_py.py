"""Numpy tape interpreter: the pure-Python fallback for the compiled kernel.

Same contract as diagsol._kernels.run_tape; one vectorized operation per
instruction over all points.
"""

from __future__ import annotations

import numpy as np

# Opcodes / statuses mirror diagsol.tape (kept as literals so the compiled and
# fallback kernels stay importable without the package).
_OP_CONST, _OP_VAR, _OP_INPUT = 0, 1, 2
_OP_ADD, _OP_SUB, _OP_MUL, _OP_DIV, _OP_NEG = 3, 4, 5, 6, 7
_OP_POWI, _OP_EXP, _OP_LN, _OP_SQRT = 8, 9, 10, 11

_OK, _DIV_ZERO, _POW_DOMAIN, _EXP_RANGE, _LN_DOMAIN, _SQRT_DOMAIN = 0, 1, 2, 3, 4, 5


def run_tape(code, consts, xs, inputs, stack_need):
    """Execute a tape over xs (3, n); returns (status, op_index, point_index, out)."""
    n = xs.shape[1]
    stack: list[np.ndarray] = []
    for i in range(code.shape[0]):
        op = int(code[i, 0])
        arg = int(code[i, 1])
        if op == _OP_CONST:
            stack.append(np.full(n, consts[arg]))
        elif op == _OP_VAR:
            stack.append(xs[arg].copy())
        elif op == _OP_INPUT:
            stack.append(inputs[arg].copy())
        elif op == _OP_ADD:
            rhs = stack.pop()
            stack[-1] = stack[-1] + rhs
        elif op == _OP_SUB:
            rhs = stack.pop()
            stack[-1] = stack[-1] - rhs
        elif op == _OP_MUL:
            rhs = stack.pop()
            stack[-1] = stack[-1] * rhs
        elif op == _OP_DIV:
            rhs = stack.pop()
            bad = rhs == 0.0
            if bad.any():
                return (_DIV_ZERO, i, int(np.argmax(bad)), None)
            stack[-1] = stack[-1] / rhs
        elif op == _OP_NEG:
            stack[-1] = -stack[-1]
        elif op == _OP_POWI:
            base = stack[-1]
            if arg < 0:
                bad = base == 0.0
                if bad.any():
                    return (_POW_DOMAIN, i, int(np.argmax(bad)), None)
            stack[-1] = base ** arg
        elif op == _OP_EXP:
            with np.errstate(over="ignore"):
                val = np.exp(stack[-1])
            bad = ~np.isfinite(val)
            if bad.any():
                return (_EXP_RANGE, i, int(np.argmax(bad)), None)
            stack[-1] = val
        elif op == _OP_LN:
            bad = stack[-1] <= 0.0
            if bad.any():
                return (_LN_DOMAIN, i, int(np.argmax(bad)), None)
            stack[-1] = np.log(stack[-1])
        elif op == _OP_SQRT:
            bad = stack[-1] < 0.0
            if bad.any():
                return (_SQRT_DOMAIN, i, int(np.argmax(bad)), None)
            stack[-1] = np.sqrt(stack[-1])
        else:
            raise ValueError(f"unknown opcode {op}")
    return (_OK, -1, -1, stack[-1])
