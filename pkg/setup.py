import os

from setuptools import setup

ext_modules = []
if os.environ.get("NILORBIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/nilorbit/_orbitc.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Cython not available: install the pure-Python package; the
        # kernel dispatcher falls back to the numpy implementation.
        ext_modules = []

setup(ext_modules=ext_modules)
