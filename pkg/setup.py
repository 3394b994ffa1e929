"""Build script: compiles the optional evaluation kernel.

The compiled extension is a pure speedup; if Cython (or a C compiler) is
unavailable the package falls back to the numpy tape interpreter at import
time. Set DIAGSOL_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DIAGSOL_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "diagsol._kernels",
                    ["src/diagsol/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
