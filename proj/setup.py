"""Builds the pybind11 extension with setuptools.

The C++ core is compiled straight into the extension module (no intermediate
static library), so a plain `pip install .` needs nothing beyond a C++20
compiler, Eigen headers, and pybind11.
"""

import os
from pathlib import Path

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ROOT = Path(__file__).resolve().parent


def eigen_include() -> str:
    override = os.environ.get("EIGEN3_INCLUDE_DIR")
    if override:
        return override
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    raise RuntimeError(
        "Eigen headers not found; install libeigen3-dev or set EIGEN3_INCLUDE_DIR"
    )


sources = sorted(f"src/{p.name}" for p in (ROOT / "src").glob("*.cpp"))
sources.append("bindings/module.cpp")

extension = Pybind11Extension(
    "gtda._gtda",
    sources,
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
)

setup(
    packages=["gtda"],
    package_dir={"": "python"},
    ext_modules=[extension],
    cmdclass={"build_ext": build_ext},
)
