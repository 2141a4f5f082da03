"""Ridge-regularized linear readout with online recursive least squares.

The inverse regularized Gram matrix P and cross-moment G are maintained so
that R = (P @ G)^T equals the batch ridge solution over the ingested samples
at every step.  Rank-one updates add samples; downdates remove them, giving
an exact sliding-window regression.  ``batch_ridge`` is the direct-solve
oracle the recursion is tested against.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DowndateSingularityError,
    InvalidRegularizerError,
    NumericInputError,
    ShapeError,
)

REMOVABILITY_EPS = 1e-10


@dataclass
class ReadoutState:
    r: np.ndarray                 # (output_dim, N) output weights
    p: np.ndarray                 # (N, N) inverse regularized Gram matrix
    g: np.ndarray                 # (N, output_dim) accumulated x s^T
    ridge: float
    window: Optional[int] = None  # sliding-window length, None = unbounded
    history: Tuple = ()           # (x, s) pairs currently inside the window


def init_readout(
    n_state: int, output_dim: int, ridge: float = 1e-6, window: Optional[int] = None
) -> ReadoutState:
    if ridge <= 0:
        raise InvalidRegularizerError(f"ridge must be > 0, got {ridge}")
    if window is not None and window < 1:
        raise InvalidRegularizerError(f"window must be >= 1, got {window}")
    return ReadoutState(
        r=np.zeros((output_dim, n_state)),
        p=np.eye(n_state) / ridge,
        g=np.zeros((n_state, output_dim)),
        ridge=float(ridge),
        window=window,
    )


def batch_ridge(x_hist: np.ndarray, targets: np.ndarray, ridge: float) -> np.ndarray:
    """Direct regularized least-squares solve.

    ``x_hist`` is N x T (one state column per step), ``targets`` is
    output_dim x T.  Returns R = (X X^T + r I)^{-1} X S^T transposed to
    output_dim x N.
    """
    if ridge <= 0:
        raise InvalidRegularizerError(f"ridge must be > 0, got {ridge}")
    x_hist = np.atleast_2d(np.asarray(x_hist, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if x_hist.shape[1] != targets.shape[1]:
        raise ShapeError("state history and targets must share the step count")
    n = x_hist.shape[0]
    gram = x_hist @ x_hist.T + ridge * np.eye(n)
    return np.linalg.solve(gram, x_hist @ targets.T).T


def _as_pair(state: ReadoutState, x, s):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if x.shape != (state.p.shape[0],):
        raise ShapeError(f"state vector must have length {state.p.shape[0]}")
    if s.shape != (state.g.shape[1],):
        raise ShapeError(f"target must have length {state.g.shape[1]}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(s))):
        raise NumericInputError("non-finite regression sample")
    return x, s


def rls_update(state: ReadoutState, x_new, s_new) -> ReadoutState:
    """Ingest one (state, target) pair; O(N^2), no matrix inversion."""
    x, s = _as_pair(state, x_new, s_new)
    px = state.p @ x
    denom = 1.0 + float(x @ px)
    p = state.p - np.outer(px, px) / denom
    p = 0.5 * (p + p.T)
    g = state.g + np.outer(x, s)
    new = replace(state, p=p, g=g, r=(p @ g).T)
    if state.window is not None:
        new.history = state.history + ((x, s),)
        if len(new.history) > state.window:
            (x_old, s_old), rest = new.history[0], new.history[1:]
            new = rls_downdate(new, x_old, s_old)
            new.history = rest
    return new


def rls_downdate(state: ReadoutState, x_old, s_old) -> ReadoutState:
    """Remove a previously ingested pair from the regression."""
    x, s = _as_pair(state, x_old, s_old)
    px = state.p @ x
    denom = 1.0 - float(x @ px)
    if denom <= REMOVABILITY_EPS:
        raise DowndateSingularityError(
            "sample not removable (1 - x'Px = %g); rebuild from batch_ridge" % denom
        )
    p = state.p + np.outer(px, px) / denom
    p = 0.5 * (p + p.T)
    g = state.g - np.outer(x, s)
    return replace(state, p=p, g=g, r=(p @ g).T, history=state.history)


def predict_output(r: np.ndarray, x: np.ndarray) -> np.ndarray:
    r = np.atleast_2d(np.asarray(r, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if r.shape[1] != x.shape[0]:
        raise ShapeError(f"weights expect state length {r.shape[1]}, got {x.shape[0]}")
    return r @ x


def save_weights_csv(r: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        for row in np.atleast_2d(r):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_weights_csv(path) -> np.ndarray:
    with open(path) as fh:
        rows = [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
    return np.array(rows)
