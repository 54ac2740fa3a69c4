from Cython.Build import cythonize
from setuptools import Extension, setup

ext_modules = [
    Extension(
        "subcomp.kernel._rotations",
        sources=["src/subcomp/kernel/_rotations.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level="3"))
