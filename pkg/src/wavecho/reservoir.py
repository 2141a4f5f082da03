"""Reservoir state integration for both neuron models.

Presynaptic update (random-reservoir default):
    x <- x + dt * (-alpha*x + tanh(rho*W@x + beta + D@s))
Postsynaptic update (structured-reservoir default):
    x <- x + dt * (-alpha*x + rho*W@tanh(x) + beta + D@s)

Explicit Euler at the gauge sample interval; W is assumed spectrally scaled
so rho acts as the effective spectral radius.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericInputError, ShapeError
from .kernels import reservoir_run as _reservoir_run
from .topology import Connectivity


@dataclass(frozen=True)
class ReservoirParams:
    alpha: float = 0.5     # leak rate, 1/s
    rho: float = 0.5       # spectral-radius multiplier
    beta_max: float = 0.5  # bias amplitude
    dt: float = 1.0        # integration step, s
    seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0 or self.dt <= 0:
            raise ConfigurationError("alpha and dt must be positive")
        if self.rho < 0 or self.beta_max < 0:
            raise ConfigurationError("rho and beta_max must be nonnegative")


@dataclass
class ReservoirState:
    x: np.ndarray
    biases: np.ndarray

    def copy(self) -> "ReservoirState":
        return ReservoirState(self.x.copy(), self.biases)


def make_state(conn: Connectivity, params: ReservoirParams) -> ReservoirState:
    """Zero state with biases drawn once from Uniform(-beta, beta)."""
    rng = np.random.default_rng([int(params.seed), 3])
    biases = rng.uniform(-params.beta_max, params.beta_max, size=conn.n)
    return ReservoirState(x=np.zeros(conn.n), biases=biases)


def _check_input(s: np.ndarray, m: int) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if s.shape != (m,):
        raise ShapeError(f"input must have length {m}, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise NumericInputError("non-finite reservoir input")
    return s


def step_presynaptic(
    state: ReservoirState, s, conn: Connectivity, p: ReservoirParams
) -> ReservoirState:
    s = _check_input(s, conn.m)
    if state.x.shape[0] != conn.n:
        raise ShapeError("state size does not match connectivity")
    x = state.x
    pre = p.rho * (conn.w @ x) + state.biases + conn.d @ s
    x_new = x + p.dt * (-p.alpha * x + np.tanh(pre))
    return ReservoirState(x_new, state.biases)


def step_postsynaptic(
    state: ReservoirState, s, conn: Connectivity, p: ReservoirParams
) -> ReservoirState:
    s = _check_input(s, conn.m)
    if state.x.shape[0] != conn.n:
        raise ShapeError("state size does not match connectivity")
    x = state.x
    drive = p.rho * (conn.w @ np.tanh(x)) + state.biases + conn.d @ s
    x_new = x + p.dt * (-p.alpha * x + drive)
    return ReservoirState(x_new, state.biases)


def step(state, s, conn, p, postsynaptic: bool) -> ReservoirState:
    if postsynaptic:
        return step_postsynaptic(state, s, conn, p)
    return step_presynaptic(state, s, conn, p)


def run_sequence(
    initial: ReservoirState,
    inputs,
    conn: Connectivity,
    p: ReservoirParams,
    postsynaptic: bool = False,
) -> np.ndarray:
    """Drive the reservoir through a sequence of inputs.

    Returns the state-history matrix X of shape (N, T); column t holds the
    state after consuming input t.  Empty input gives an (N, 0) matrix.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs[:, None]
    if inputs.size and inputs.shape[1] != conn.m:
        raise ShapeError(f"inputs must have {conn.m} columns, got {inputs.shape[1]}")
    if inputs.size == 0:
        return np.zeros((conn.n, 0))
    if not np.all(np.isfinite(inputs)):
        raise NumericInputError("non-finite reservoir input sequence")
    return _reservoir_run(
        np.ascontiguousarray(conn.w),
        np.ascontiguousarray(conn.d),
        state_biases(initial),
        initial.x.copy(),
        np.ascontiguousarray(inputs),
        p.alpha,
        p.rho,
        p.dt,
        postsynaptic,
    )


def state_biases(state: ReservoirState) -> np.ndarray:
    return np.ascontiguousarray(state.biases, dtype=float)
