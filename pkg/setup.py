"""Build script: compiles the Cython kernel extension when possible.

If the extension cannot be built (no compiler, no Cython), the package
still installs and falls back to the pure-numpy kernels at import time.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension but degrade to the pure-Python kernels on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            sys.stderr.write(
                f"warning: building sao_lab._kernels_cy failed ({exc}); "
                "the pure-numpy fallback kernels will be used.\n"
            )

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write(
                f"warning: building {ext.name} failed ({exc}); "
                "the pure-numpy fallback kernels will be used.\n"
            )


def make_extensions():
    try:
        import os

        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    # The numpy.random C distributions live in a static helper library.
    random_lib = os.path.join(os.path.dirname(np.random.__file__), "lib")
    ext = Extension(
        "sao_lab._kernels_cy",
        ["src/sao_lab/_kernels_cy.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[random_lib],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
