"""Backend selection for the numeric kernels.

Hot loops (surrogate prediction inside the multi-start local search, Lloyd
iterations) exist twice: a numba ``@njit`` version and a pure-numpy version.
The default backend is read once from the ``SBOC_BACKEND`` environment
variable (``numba`` or ``numpy``); every kernel entry point also accepts an
explicit ``backend=`` argument so both paths can be exercised side by side.
"""

import os
import warnings

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")

_env = os.environ.get("SBOC_BACKEND", "numba").strip().lower()
if _env not in BACKENDS:
    warnings.warn(f"unknown SBOC_BACKEND={_env!r}, using numpy", stacklevel=1)
    _env = "numpy"
DEFAULT_BACKEND = _env if HAVE_NUMBA else "numpy"


def resolve_backend(backend=None):
    if backend is None:
        return DEFAULT_BACKEND
    backend = backend.lower()
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        return "numpy"
    return backend


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise.

    Compilation is lazy, so selecting the numpy backend never pays JIT cost.
    """
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
