import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("sleeplens._split_cy", ["src/sleeplens/_split_cy.pyx"])],
        language_level=3,
    )
except ImportError:
    # The package falls back to the numpy kernels at import time.
    ext_modules = []

setup(
    ext_modules=ext_modules,
    include_dirs=[numpy.get_include()],
)
