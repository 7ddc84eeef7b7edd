"""Kernel backend selection: numba-jitted loops or pure-numpy fallbacks.

The hot inner loops (PDE stepping, Jost propagation sweeps) dominate
runtime for large grids.  By default they run as numba ``@njit`` kernels;
setting the environment variable ``MTM_DISABLE_NUMBA=1`` before import
selects the pure-numpy implementations instead (useful on platforms
without a working numba, and for the benchmark in ``benchmarks/``).
"""

import os

NUMBA_ENABLED = os.environ.get("MTM_DISABLE_NUMBA", "0") not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        """No-op decorator standing in for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"
