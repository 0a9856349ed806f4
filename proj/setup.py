from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = [
    "src/grid.cpp",
    "src/mathieu.cpp",
    "src/model.cpp",
    "src/trajectory.cpp",
    "src/rpif.cpp",
    "src/qnd.cpp",
]

setup(
    ext_modules=[
        Pybind11Extension(
            "paultrap._paultrap",
            core_sources + ["src/python/module.cpp"],
            include_dirs=["include", "vendor"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
