"""Builds the optional compiled family-scan kernel.

The package works without it: summability._kernels falls back to the pure
Python implementation when the extension is missing.  No -ffast-math and no
-march flags: the compiled kernel must be bit-identical to the fallback.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    # -ffp-contract=off: no FMA contraction, so the compiled kernel stays
    # bit-identical to the pure-Python fallback on every architecture.
    ext = Extension(
        "summability._kernels._scan_cy",
        sources=["src/summability/_kernels/_scan_cy.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    ext.optional = True
    ext_modules = cythonize(ext, compiler_directives={"language_level": "3"})
except ImportError:
    pass

setup(ext_modules=ext_modules)
