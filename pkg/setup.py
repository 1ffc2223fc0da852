from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "markovcycles._kernels",
                ["src/markovcycles/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:  # build from sdist without Cython: fall back to pure python
    ext_modules = []

setup(
    ext_modules=ext_modules,
    package_dir={"": "src"},
    packages=["markovcycles"],
)
