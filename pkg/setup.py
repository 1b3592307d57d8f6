from setuptools import setup, Extension

# The compiled elimination core is optional: the package falls back to the
# pure-Python kernel in edgehodge._elimpure when the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "edgehodge._elimcore",
                ["src/edgehodge/_elimcore.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
