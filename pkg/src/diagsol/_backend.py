"""Evaluation backend selection.

Prefers the compiled kernel when the extension built; falls back to the numpy
interpreter otherwise. DIAGSOL_BACKEND=python|compiled overrides (the latter
raises if the extension is missing).
"""

from __future__ import annotations

import os


def _load():
    choice = os.environ.get("DIAGSOL_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "compiled", "python", ""):
        raise ValueError(
            f"DIAGSOL_BACKEND must be 'auto', 'compiled' or 'python', got {choice!r}"
        )
    if choice in ("auto", "compiled", ""):
        try:
            from . import _kernels

            return _kernels, "compiled"
        except ImportError:
            if choice == "compiled":
                raise
    from . import _kernels_py

    return _kernels_py, "python"


_impl, _name = _load()


def run_tape(code, consts, xs, inputs, stack_need):
    return _impl.run_tape(code, consts, xs, inputs, stack_need)


def backend_name() -> str:
    return _name
