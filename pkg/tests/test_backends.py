"""Parity between the compiled tape kernel and the numpy fallback."""

import importlib

import numpy as np
import pytest

from diagsol import DomainError, evaluate, eval_many, parse_expr
from diagsol.tape import (
    OP_ADD,
    OP_CONST,
    OP_DIV,
    OP_EXP,
    OP_INPUT,
    OP_LN,
    OP_MUL,
    OP_NEG,
    OP_POWI,
    OP_SQRT,
    OP_SUB,
    OP_VAR,
    compile_tape,
)
from diagsol import _kernels_py

from conftest import random_triples

try:
    from diagsol import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(
    _kernels is None, reason="compiled kernel not built"
)


def _run(impl, e, pts):
    tape = compile_tape(e)
    xs = np.ascontiguousarray(pts.T)
    inputs = np.empty((0, pts.shape[0]))
    status, _, _, out = impl.run_tape(
        tape.code, tape.consts, xs, inputs, tape.stack_need
    )
    assert status == 0
    return out


@needs_compiled
def test_opcode_tables_match():
    expected = {
        "CONST": OP_CONST,
        "VAR": OP_VAR,
        "INPUT": OP_INPUT,
        "ADD": OP_ADD,
        "SUB": OP_SUB,
        "MUL": OP_MUL,
        "DIV": OP_DIV,
        "NEG": OP_NEG,
        "POWI": OP_POWI,
        "EXP": OP_EXP,
        "LN": OP_LN,
        "SQRT": OP_SQRT,
    }
    assert _kernels.OPCODES == expected


def test_eval_many_matches_scalar_eval():
    rng = np.random.default_rng(3)
    for e, _, _ in random_triples(17, 40):
        pts = rng.uniform(-1, 1, size=(31, 3))
        batch = eval_many(e, pts)
        scalar = np.array([evaluate(e, p) for p in pts])
        np.testing.assert_allclose(batch, scalar, rtol=1e-13, atol=1e-13)


@needs_compiled
def test_backends_agree_on_random_exprs():
    rng = np.random.default_rng(5)
    for e, _, _ in random_triples(29, 40):
        pts = rng.uniform(-1, 1, size=(17, 3))
        a = _run(_kernels, e, pts)
        b = _run(_kernels_py, e, pts)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-14)


def test_batch_domain_error_localizes_point():
    e = parse_expr("1/x1")
    pts = np.array([[1.0, 0, 0], [0.0, 0, 0], [2.0, 0, 0]])
    with pytest.raises(DomainError, match="division by zero"):
        eval_many(e, pts)


def test_batch_ln_and_sqrt_domain_errors():
    pts = np.array([[0.5, 0, 0], [-0.5, 0, 0]])
    with pytest.raises(DomainError, match="ln"):
        eval_many(parse_expr("ln(x1)"), pts)
    with pytest.raises(DomainError, match="sqrt"):
        eval_many(parse_expr("sqrt(x1)"), pts)
    with pytest.raises(DomainError, match="negative power"):
        eval_many(parse_expr("x1^-2"), np.array([[0.0, 0, 0]]))
    with pytest.raises(DomainError, match="overflow"):
        eval_many(parse_expr("exp(x1)"), np.array([[1e4, 0, 0]]))


def test_antideriv_inputs_in_batch():
    e = parse_expr("x2 * antideriv(1/exp(x1), x1, 0)")
    rng = np.random.default_rng(9)
    pts = rng.uniform(-1, 1, size=(25, 3))
    batch = eval_many(e, pts)
    scalar = np.array([evaluate(e, p) for p in pts])
    np.testing.assert_allclose(batch, scalar, rtol=1e-12, atol=1e-13)


def test_forced_python_backend_env(monkeypatch):
    # _backend honors DIAGSOL_BACKEND at import; simulate a fresh load.
    import diagsol._backend as backend_mod

    monkeypatch.setenv("DIAGSOL_BACKEND", "python")
    fresh = importlib.reload(backend_mod)
    try:
        assert fresh.backend_name() == "python"
    finally:
        monkeypatch.delenv("DIAGSOL_BACKEND")
        importlib.reload(backend_mod)


def test_empty_point_set():
    assert eval_many(parse_expr("x1"), np.empty((0, 3))).shape == (0,)
