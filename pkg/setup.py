from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install: the package falls back to jumpback._native.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("jumpback._speedups", ["src/jumpback/_speedups.pyx"])],
        language_level="3",
    )

setup(ext_modules=ext_modules)
