"""Build script for the compiled propagation kernel.

The package works without the extension (a pure-Python twin of the kernel is
selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "slowgyro._ringprop",
                ["src/slowgyro/_ringprop.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
