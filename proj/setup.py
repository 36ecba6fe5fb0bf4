"""Builds the _carlab extension by driving the project's CMake build."""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_path.parent.mkdir(parents=True, exist_ok=True)

        cmake_args = [
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
            "-DCARLAB_BUILD_TESTS=OFF",
            "-DCARLAB_BUILD_PYTHON=ON",
        ]
        subprocess.run(
            ["cmake", "-S", str(source_dir), "-B", str(build_dir)] + cmake_args,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_carlab"],
            check=True,
        )
        built = next(build_dir.glob("_carlab*.so"))
        shutil.copy2(built, ext_path)


setup(
    ext_modules=[CMakeExtension("carlab._carlab")],
    cmdclass={"build_ext": CMakeBuild},
)
