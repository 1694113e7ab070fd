"""Build script for the optional compiled kernels.

The extension links against the system MPFR and GMP libraries.  When it cannot
be built the package still installs and falls back to pure-Python kernels.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("gaussaim._cext", ["src/gaussaim/_cext.pyx"], libraries=["mpfr", "gmp"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or headers missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    def _warn(self, exc):
        if os.environ.get("GAUSSAIM_REQUIRE_EXT"):
            raise exc
        print(f"warning: compiled kernels not built ({exc}); using pure-Python fallback",
              file=sys.stderr)


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
