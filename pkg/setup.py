"""Build the optional Cython kernels.

The package works without them: ``permsaddle._backend`` falls back to the
NumPy implementation when ``permsaddle._kernels`` cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("PERMSADDLE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "permsaddle._kernels",
                    ["src/permsaddle/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no FMA contraction: kernels must match the NumPy fallback bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
