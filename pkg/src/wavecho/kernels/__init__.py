"""Hot-kernel dispatch.

The active implementation is chosen once, from WAVECHO_NUMBA (see
``wavecho._backend``).  Both backends expose the same functions and are
cross-checked in the test suite; ``benchmarks/bench_backends.py`` compares
their speed.
"""

from .._backend import USE_NUMBA, backend_name

if USE_NUMBA:
    from . import numba_backend as _impl
else:
    from . import numpy_backend as _impl

reservoir_run = _impl.reservoir_run
tridiag_solve = _impl.tridiag_solve
reconstruct_faces = _impl.reconstruct_faces
hllc_faces = _impl.hllc_faces
momentum_from_velocity = _impl.momentum_from_velocity
velocity_from_momentum = _impl.velocity_from_momentum
flume_rhs = _impl.flume_rhs

__all__ = [
    "USE_NUMBA",
    "backend_name",
    "reservoir_run",
    "tridiag_solve",
    "reconstruct_faces",
    "hllc_faces",
    "momentum_from_velocity",
    "velocity_from_momentum",
    "flume_rhs",
]
