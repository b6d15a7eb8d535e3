import os

from setuptools import Extension, setup

# The compiled DBSCAN kernel is optional: the package falls back to the pure
# numpy kernel when the extension is missing (see lociscan.cluster.dbscan).
ext_modules = []
if os.environ.get("LOCISCAN_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "lociscan.cluster._dbscan_cy",
                    ["src/lociscan/cluster/_dbscan_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        print(f"lociscan: building without compiled DBSCAN kernel ({exc})")

setup(ext_modules=ext_modules)
