"""Build the optional compiled search kernel.

If Cython or a C++ compiler is missing the package still installs and the
pure-Python kernel is used instead.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "concplan.search._kernels",
                ["src/concplan/search/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": 3},
        quiet=True,
    )

setup(ext_modules=ext_modules)
