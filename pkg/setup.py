"""Build the optional compiled kernel extension.

The package works without it (a pure-NumPy fallback is selected at import
time), so any failure here downgrades to a source-only install instead of
aborting.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "pkpkit._core",
                sources=["src/pkpkit/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError as exc:  # pragma: no cover - degraded build path
    print(f"pkpkit: building without the compiled core ({exc})")

setup(ext_modules=ext_modules)
