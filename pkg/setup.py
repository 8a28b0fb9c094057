import os

from setuptools import setup

ext_modules = []
if os.environ.get("TLF_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/tightforest/_kernel_c.pyx"], language_level=3
        )
    except ImportError:
        # Pure-Python lane still works; kernels.py falls back at import.
        ext_modules = []

setup(ext_modules=ext_modules)
