"""Build script: compiles the optional flow kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile only costs speed.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "klinkage._kernel._cflow",
                ["src/klinkage/_kernel/_cflow.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("cython not available; installing with the pure-Python kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
