"""Build hook for the optional compiled elimination kernel.

The package works without it: ``quadric_links.kernel.accel`` falls back to
the pure-Python implementation when the extension is absent.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("QUADRIC_LINKS_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "quadric_links.kernel._elim",
                    ["src/quadric_links/kernel/_elim.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
