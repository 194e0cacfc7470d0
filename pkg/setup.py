import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the C code on strict per-op IEEE semantics so the
# compiled kernels stay bit-compatible with the NumPy fallback.
extensions = [
    Extension(
        "diverid.kernels._cykernels",
        sources=["src/diverid/kernels/_cykernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
