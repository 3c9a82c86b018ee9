"""Build script: compiles the fast field kernels when Cython and a C
compiler are available.  The package works without them (pure-Python
kernels are selected at import time), so extension build failures are
non-fatal."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/mith/_fastcore.pyx",
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
