"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
implementation of the same kernels is selected at import time), so any
failure here degrades to the fallback instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/terracini/_kernels/fastkernels.pyx"],
        language_level=3,
    )
except Exception as exc:  # Cython missing or cythonization failed
    print(f"terracini: building without compiled kernels ({exc!r})")

setup(ext_modules=ext_modules)
