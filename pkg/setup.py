"""Build hook for the optional compiled kernel.

The package is pure Python plus one Cython extension holding the hot
per-grid-point solve used by the parameter scan.  If Cython or a C
compiler is unavailable the extension is skipped and the package falls
back to the pure-Python kernel selected at import time.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("DISSLAB_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "disslab._kernels",
        ["src/disslab/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=_extensions())
