"""Build script for the compiled matching core.

The extension is optional: if Cython or a C compiler is unavailable the
package still installs and falls back to the pure-Python blossom.
"""
import os

import numpy as np
from setuptools import setup

ext_modules = []
if not os.environ.get("TORICBATH_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "toricbath.matching._blossom_ext",
                    ["src/toricbath/matching/_blossom_ext.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
