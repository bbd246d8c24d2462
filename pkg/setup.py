"""Build script: compiles the kernel extension when Cython and a C
compiler are available; the package falls back to the pure-Python kernels
at import time otherwise."""

from setuptools import setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        "src/soddy/_kernels/_fast.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
