"""Build script: compiles the optional row-reduction kernel.

The package is pure Python except for strathom._kernel, a small Cython
extension accelerating dense row reduction.  The extension is strictly
optional: if Cython or a C compiler is unavailable the install proceeds
and strathom falls back to the pure-Python kernel at import time.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any toolchain failure is fine
            warnings.warn(f"compiled kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"compiled kernel skipped ({ext.name}): {exc}")


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/strathom/_kernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # noqa: BLE001 - Cython missing entirely
    warnings.warn(f"compiled kernel skipped (no Cython): {exc}")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
