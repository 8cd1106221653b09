"""Build script: compiles the propagation kernel when a toolchain is available.

The package stays fully functional without the extension; tss.propagation
falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Best-effort extension build: failures degrade to the Python kernel."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "falling back to the pure-Python kernel")


extensions = []
if not os.environ.get("TSS_SKIP_BUILD_EXT"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [Extension("tss._propagation_cy", ["src/tss/_propagation_cy.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython unavailable; building without the compiled kernel")

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
