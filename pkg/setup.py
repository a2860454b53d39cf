import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled stepping kernels bit-compatible with
# the NumPy fallback (no FMA contraction).
ext_module = Extension(
    "mdnomad._kernels._native",
    ["src/mdnomad/_kernels/_native.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

setup(
    ext_modules=cythonize(ext_module, compiler_directives={"language_level": "3"}),
)
