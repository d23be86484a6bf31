"""Build the optional Cython kernels.

The package works without them; ``dssfade.kernels`` falls back to numpy
when the compiled module cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DSSFADE_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "dssfade._ckernels",
                    ["src/dssfade/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
