import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("PERFLAB_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        args = [] if sys.platform == "win32" else ["-O3", "-ffp-contract=off"]
        ext_modules = cythonize(
            [Extension("perflab.sim._kernel", ["src/perflab/sim/_kernel.pyx"],
                       include_dirs=[np.get_include()], extra_compile_args=args)],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        print("Cython or numpy missing: building without the compiled kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
