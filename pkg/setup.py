"""Build script: compiles the optional resampling kernel when Cython is around.

Set LLLAB_NO_EXT=1 to force a pure-Python install; the package selects the
fallback loop at import time when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("LLLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/lllab/_mtkernel.pyx"],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
