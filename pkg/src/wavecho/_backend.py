"""Numerical backend selection.

Hot kernels (flume right-hand side, reservoir stepping) exist twice: a numba
@njit implementation and a pure-numpy one.  The active backend is chosen once
at import time from the WAVECHO_NUMBA environment variable:

  unset / "auto"   use numba when importable, numpy otherwise
  "1", "true"      require numba (ImportError if missing)
  "0", "false"     force the pure-numpy fallback

``benchmarks/bench_backends.py`` compares the two.
"""

import os

_FLAG = os.environ.get("WAVECHO_NUMBA", "auto").strip().lower()


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


if _FLAG in ("0", "false", "no", "off"):
    USE_NUMBA = False
elif _FLAG in ("1", "true", "yes", "on"):
    if not _numba_available():
        raise ImportError("WAVECHO_NUMBA=1 but numba is not importable")
    USE_NUMBA = True
else:
    USE_NUMBA = _numba_available()


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
