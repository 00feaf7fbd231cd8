from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("etnckit._kernels", ["src/etnckit/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
)
