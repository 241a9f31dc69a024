"""Build script: compiles the optional similarity-scoring extension.

The package works without the extension (a pure-Python scorer is selected
at import time), so a failing C toolchain must not break installation.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow extension build failures; the pure fallback takes over."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping extension build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: could not compile {ext.name} ({exc})")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        ["src/tacit/learner/_simkernel.pyx"],
        language_level="3",
    )
except Exception as exc:  # noqa: BLE001
    print(f"warning: cython unavailable, building pure-Python only ({exc})")
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
