"""Build script.  The compiled kernel extension is optional: if Cython (or a C
compiler) is unavailable the package installs anyway and falls back to the
pure-Python kernels at import time."""

import os

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    pyx = "src/flagsphere/kernels/_ckernels.pyx"
    if os.path.exists(pyx):
        ext_modules = cythonize(
            [pyx],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
except ImportError:
    pass

setup(ext_modules=ext_modules)
