import os

from setuptools import Extension, setup


def get_extensions():
    if os.environ.get("HOINV_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    extensions = [
        Extension(
            "hoinv._rref_ext",
            ["src/hoinv/_rref_ext.pyx"],
            extra_compile_args=["-O3"],
        )
    ]
    return cythonize(extensions, compiler_directives={"language_level": "3"})


setup(ext_modules=get_extensions())
