"""Build script for the compiled training kernel.

The hot loop (per-sample hinge-loss updates) is compiled from Cython.
``-ffp-contract=off`` keeps the C arithmetic IEEE-754-identical to the
pure-Python fallback in ``policylens._pegasos_py`` so both backends
produce bit-equal models.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "policylens._pegasos_cy",
        ["src/policylens/_pegasos_cy.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        include_dirs=[numpy.get_include()],
    ),
]

setup(ext_modules=cythonize(extensions, language_level=3))
