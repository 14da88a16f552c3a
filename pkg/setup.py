"""Build script: compiles the optional shooting-integrator extension.

The package is fully functional without the extension (a pure-Python
integrator with identical semantics is selected at import time), so any
failure to build it is downgraded to a warning rather than a hard error.
"""

import warnings

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "capspec._kernel._shootrk",
                ["src/capspec/_kernel/_shootrk.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only without Cython
    warnings.warn(f"building without compiled kernel ({exc!r})")

setup(ext_modules=ext_modules)
