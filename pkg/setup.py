import os

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# counting backend when the extension is absent (set HILBZETA_NO_EXT=1 to
# skip the build deliberately).
ext_modules = []
if not os.environ.get("HILBZETA_NO_EXT") and os.path.exists(
    "src/hilbzeta/_fastcount.pyx"
):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hilbzeta._fastcount",
                ["src/hilbzeta/_fastcount.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
