"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); compiling it just makes the per-trial iteration loops much
faster.  `optional=True` keeps installation alive on toolchain-less hosts.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "difflmp._kernels",
                ["src/difflmp/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
