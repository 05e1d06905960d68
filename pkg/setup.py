import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CASSINIAN_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "cassinian._kernels",
                    ["src/cassinian/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # pure-Python fallback kernels are selected at import time
        ext_modules = []

setup(ext_modules=ext_modules)
