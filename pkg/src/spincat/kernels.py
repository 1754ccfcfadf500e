"""Backend selection for the numerical hot loops.

The compiled extension ``spincat._kernels`` is used when it imports;
otherwise the NumPy fallback in ``spincat._kernels_py`` takes over.
Setting ``SPINCAT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from spincat import _kernels_py

try:
    from spincat import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("SPINCAT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
    _impl = _compiled
else:
    BACKEND = "python"
    _impl = _kernels_py

STATUS_OK = _kernels_py.STATUS_OK
STATUS_UNDERFLOW = _kernels_py.STATUS_UNDERFLOW
STATUS_MAX_STEPS = _kernels_py.STATUS_MAX_STEPS

dopri_tridiag = _impl.dopri_tridiag
threej_recursion = _impl.threej_recursion
legendre_table = _impl.legendre_table
legendre_sum = _impl.legendre_sum


def available_backends():
    """Names of kernel modules importable in this environment."""
    names = ["python"]
    if _compiled is not None:
        names.append("cython")
    return names


def backend_module(name):
    """Return the kernel module called ``name`` ('python' or 'cython')."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled spincat._kernels is not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")
