"""Build the optional Cython kernels.

The package works without them: ``bookramsey._backend`` falls back to the
pure-Python kernels when the extension is missing.  Set
``BOOKRAMSEY_NO_EXT=1`` to skip compilation entirely.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("BOOKRAMSEY_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:  # pragma: no cover
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "bookramsey._ckernels",
                    ["src/bookramsey/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
