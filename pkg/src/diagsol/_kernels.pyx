# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tape interpreter.

Points are processed in blocks sized to keep the whole evaluation stack in
cache while the full instruction tape runs over each block. Opcode and status
numbering must match diagsol.tape; the test suite cross-checks the table.
"""

from libc.math cimport exp as c_exp, log as c_log, sqrt as c_sqrt, isfinite

import numpy as np

# Mirrors diagsol.tape; cross-checked by the test suite.
OPCODES = {
    "CONST": 0, "VAR": 1, "INPUT": 2, "ADD": 3, "SUB": 4, "MUL": 5,
    "DIV": 6, "NEG": 7, "POWI": 8, "EXP": 9, "LN": 10, "SQRT": 11,
}
STATUSES = {
    "OK": 0, "DIV_ZERO": 1, "POW_DOMAIN": 2, "EXP_RANGE": 3,
    "LN_DOMAIN": 4, "SQRT_DOMAIN": 5,
}

DEF BLOCK = 512


cdef inline double _powi(double base, int e) noexcept:
    cdef double result = 1.0
    cdef double b = base
    cdef unsigned int n
    if e < 0:
        b = 1.0 / b
        n = <unsigned int>(-<long long>e)
    else:
        n = <unsigned int>e
    while n:
        if n & 1u:
            result *= b
        b *= b
        n >>= 1
    return result


def run_tape(int[:, ::1] code, double[::1] consts, double[:, ::1] xs,
             double[:, ::1] inputs, Py_ssize_t stack_need):
    """Execute a tape over xs (3, n); returns (status, op_index, point_index, out)."""
    cdef Py_ssize_t n = xs.shape[1]
    cdef Py_ssize_t n_ops = code.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    stack_arr = np.empty((stack_need, BLOCK), dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[:, ::1] stack = stack_arr
    cdef Py_ssize_t b0, width, i, j, sp
    cdef int op, arg
    cdef double v
    for b0 in range(0, n, BLOCK):
        width = n - b0
        if width > BLOCK:
            width = BLOCK
        sp = 0
        for i in range(n_ops):
            op = code[i, 0]
            arg = code[i, 1]
            if op == 0:  # CONST
                v = consts[arg]
                for j in range(width):
                    stack[sp, j] = v
                sp += 1
            elif op == 1:  # VAR
                for j in range(width):
                    stack[sp, j] = xs[arg, b0 + j]
                sp += 1
            elif op == 2:  # INPUT
                for j in range(width):
                    stack[sp, j] = inputs[arg, b0 + j]
                sp += 1
            elif op == 3:  # ADD
                sp -= 1
                for j in range(width):
                    stack[sp - 1, j] = stack[sp - 1, j] + stack[sp, j]
            elif op == 4:  # SUB
                sp -= 1
                for j in range(width):
                    stack[sp - 1, j] = stack[sp - 1, j] - stack[sp, j]
            elif op == 5:  # MUL
                sp -= 1
                for j in range(width):
                    stack[sp - 1, j] = stack[sp - 1, j] * stack[sp, j]
            elif op == 6:  # DIV
                sp -= 1
                for j in range(width):
                    if stack[sp, j] == 0.0:
                        return (1, i, b0 + j, None)
                for j in range(width):
                    stack[sp - 1, j] = stack[sp - 1, j] / stack[sp, j]
            elif op == 7:  # NEG
                for j in range(width):
                    stack[sp - 1, j] = -stack[sp - 1, j]
            elif op == 8:  # POWI
                if arg < 0:
                    for j in range(width):
                        if stack[sp - 1, j] == 0.0:
                            return (2, i, b0 + j, None)
                for j in range(width):
                    stack[sp - 1, j] = _powi(stack[sp - 1, j], arg)
            elif op == 9:  # EXP
                for j in range(width):
                    v = c_exp(stack[sp - 1, j])
                    if not isfinite(v):
                        return (3, i, b0 + j, None)
                    stack[sp - 1, j] = v
            elif op == 10:  # LN
                for j in range(width):
                    if stack[sp - 1, j] <= 0.0:
                        return (4, i, b0 + j, None)
                for j in range(width):
                    stack[sp - 1, j] = c_log(stack[sp - 1, j])
            elif op == 11:  # SQRT
                for j in range(width):
                    if stack[sp - 1, j] < 0.0:
                        return (5, i, b0 + j, None)
                for j in range(width):
                    stack[sp - 1, j] = c_sqrt(stack[sp - 1, j])
            else:
                raise ValueError(f"unknown opcode {op}")
        for j in range(width):
            out[b0 + j] = stack[sp - 1, j]
    return (0, -1, -1, out_arr)
