import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("COMMNET_PURE"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "commnet._trajkernel",
                    ["src/commnet/_trajkernel.pyx"],
                    include_dirs=[np.get_include()],
                )
            ],
            language_level="3",
        )
    except ImportError:
        # No Cython toolchain: install the pure-Python package; the mobility
        # module falls back to the interpreted kernel at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
