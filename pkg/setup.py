"""Build script: compiles the optional Cython speedup core.

The package works without the extension (a pure-Python kernel module is
selected at import time), so a failed compile downgrades to a warning
instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/patrolwalks/_speedups.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"patrolwalks: skipping compiled kernels ({exc}); "
          "pure-Python fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules)
