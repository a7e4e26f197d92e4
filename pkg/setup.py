"""Build script for the optional compiled evaluation kernel.

The package is pure Python plus one Cython extension for the hot
sampling kernel.  If Cython or a C compiler is unavailable the build
falls through and the numpy fallback kernel is used at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "chaosdet._kernels._native",
                ["src/chaosdet/_kernels/_native.pyx"],
                # -ffp-contract=off keeps per-operation IEEE rounding so the
                # compiled kernel matches the numpy fallback bit for bit.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
