"""Forecasting protocol: training, trough-triggered refits, free runs, RMS.

A run trains teacher-forced for the training span, then walks the
evaluation span tracking the measured signal (with per-sample recursive
regression updates when online updating is enabled).  At every stride-th
wave trough it launches a free-running forecast over the configured horizon
(output fed back as input, spectral variants reconstructing one elevation
sample per step) and scores those forecast samples against the truth.
"""

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, InsufficientDataError, WavechoError
from .readout import ReadoutState, init_readout, rls_update
from .reservoir import ReservoirParams, ReservoirState, make_state, run_sequence, step
from .series import GaugeSeries
from .spectral import (
    SpectralFrame,
    coeffs_from_split,
    incremental_update,
    reconstruct_latest,
    split_to_input,
    window_transform,
)
from .topology import NetworkCode, build_connectivity, parse_code

PARAMETER_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
PAPER_SEA_STATES = ((0.5, 8.0), (1.0, 8.0), (1.0, 10.0), (1.0, 12.0), (2.0, 10.0))


@dataclass(frozen=True)
class ForecastConfig:
    training_duration: float = 900.0
    evaluation_duration: float = 600.0
    stride: int = 2                 # forecast launch every stride-th trough
    horizon: Optional[int] = None   # free-run steps; default ceil(2 Tp * rate)
    sample_rate: float = 1.0
    washout: int = 100
    ridge: float = 1e-6
    fft_window: int = 16
    online_updates: bool = True
    divergence_factor: float = 50.0  # |prediction| > factor * Hs flags divergence

    def __post_init__(self):
        if self.training_duration <= 0 or self.stride < 1:
            raise ConfigurationError("training_duration must be > 0 and stride >= 1")
        if self.sample_rate <= 0:
            raise ConfigurationError("sample_rate must be > 0")


@dataclass
class PredictionReport:
    code: str
    alpha: float
    rho: float
    beta_max: float
    hs: float
    tp: float
    rms: float
    per_segment_rms: Tuple[float, ...]
    n_segments: int
    diverged: bool
    trace_t: np.ndarray = field(repr=False)
    trace_truth: np.ndarray = field(repr=False)
    trace_pred: np.ndarray = field(repr=False)
    display_t: np.ndarray = field(repr=False)
    display_truth: np.ndarray = field(repr=False)
    display_pred: np.ndarray = field(repr=False)
    display_phase: Tuple[str, ...] = field(repr=False)
    error: Optional[str] = None


def detect_troughs(series) -> np.ndarray:
    """Indices of strict local minima below zero.

    eta[i] < eta[i-1], eta[i] <= eta[i+1] and eta[i] < 0; the below-zero
    requirement rejects micro-ripples riding on crests.
    """
    eta = np.asarray(series.eta if isinstance(series, GaugeSeries) else series, dtype=float)
    if eta.size < 3:
        return np.array([], dtype=int)
    mid = eta[1:-1]
    mask = (mid < eta[:-2]) & (mid <= eta[2:]) & (mid < 0.0)
    return np.nonzero(mask)[0] + 1


def _scalarize(vec: np.ndarray, frequency_domain: bool) -> float:
    if frequency_domain:
        return reconstruct_latest(coeffs_from_split(vec))
    return float(vec[0])


class _Frontend:
    """Streaming input-vector builder: scalar pass-through or sliding DFT."""

    def __init__(self, code: NetworkCode, window: int):
        self.frequency_domain = bool(code.input_domain)
        self.frame = (
            window_transform(np.zeros(window)) if self.frequency_domain else None
        )

    def push(self, value: float) -> np.ndarray:
        if self.frequency_domain:
            self.frame = incremental_update(self.frame, value)
            return split_to_input(self.frame)
        return np.array([float(value)])

    def copy(self) -> "_Frontend":
        clone = object.__new__(_Frontend)
        clone.frequency_domain = self.frequency_domain
        clone.frame = self.frame.copy() if self.frame is not None else None
        return clone


def _train_full(series, code, params, config):
    eta = series.eta
    rate = config.sample_rate
    n_train = int(round(config.training_duration * rate))
    if len(eta) < n_train:
        raise InsufficientDataError(
            f"series has {len(eta)} samples, training needs {n_train}"
        )
    if n_train <= config.washout + 1:
        raise InsufficientDataError("training span shorter than the washout")

    tau_m = 1.0 / params.alpha
    conn = build_connectivity(code, params.seed, tau_m)
    frontend = _Frontend(code, config.fft_window)
    inputs = np.empty((n_train, conn.m))
    for t in range(n_train):
        inputs[t] = frontend.push(eta[t])

    init = make_state(conn, params)
    history = run_sequence(init, inputs, conn, params, code.is_postsynaptic)
    readout = init_readout(conn.n, conn.m, config.ridge)

    train_pred = np.zeros(n_train)
    for t in range(config.washout, n_train - 1):
        x_t = history[:, t]
        train_pred[t + 1] = _scalarize(readout.r @ x_t, frontend.frequency_domain)
        readout = rls_update(readout, x_t, inputs[t + 1])

    state = ReservoirState(history[:, -1].copy(), init.biases)
    return conn, state, frontend, readout, train_pred


def train(series, code, params: ReservoirParams, config: Optional[ForecastConfig] = None):
    """Teacher-forced training; returns (reservoir state, readout state)."""
    if isinstance(code, str):
        code = parse_code(code)
    config = config or ForecastConfig()
    _, state, _, readout, _ = _train_full(series, code, params, config)
    return state, readout


def free_run(
    reservoir_state: ReservoirState,
    readout: ReadoutState,
    conn,
    params: ReservoirParams,
    horizon_steps: int,
    frame: Optional[SpectralFrame] = None,
    guard: float = math.inf,
    postsynaptic: bool = False,
):
    """Run with output feedback for ``horizon_steps`` samples.

    Spectral variants reconstruct the newest time-domain sample from the
    predicted spectrum, push it into the sliding window and re-transform.
    Samples beyond ``guard`` in magnitude are clamped and flag divergence.

    Returns (samples, diverged).
    """
    x = reservoir_state.copy()
    fr = frame.copy() if frame is not None else None
    preds = np.empty(horizon_steps)
    diverged = False
    for j in range(horizon_steps):
        vec = readout.r @ x.x
        val = _scalarize(vec, fr is not None)
        if not math.isfinite(val):
            val = 0.0
            diverged = True
        elif abs(val) > guard:
            val = math.copysign(guard, val)
            diverged = True
        preds[j] = val
        if fr is not None:
            fr = incremental_update(fr, val)
            s = split_to_input(fr)
        else:
            s = np.array([val])
        x = step(x, s, conn, params, postsynaptic)
    return preds, diverged


def compute_rms(pred, truth) -> float:
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape:
        raise ConfigurationError("prediction and truth must have equal length")
    if pred.size == 0:
        return math.nan
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def evaluate(series: GaugeSeries, code, params: ReservoirParams,
             config: Optional[ForecastConfig] = None) -> PredictionReport:
    """Full protocol for one run; scores free-run samples only."""
    if isinstance(code, str):
        code = parse_code(code)
    config = config or ForecastConfig()
    if abs(series.sample_rate - config.sample_rate) > 1e-12:
        raise ConfigurationError(
            f"series rate {series.sample_rate} != config rate {config.sample_rate}"
        )
    rate = config.sample_rate
    n_train = int(round(config.training_duration * rate))
    n_eval = int(round(config.evaluation_duration * rate))
    need = n_train + n_eval
    if len(series) < need:
        raise InsufficientDataError(
            f"series has {len(series)} samples, protocol needs {need}"
        )
    horizon = config.horizon or int(math.ceil(2.0 * series.tp * rate))

    conn, x, frontend, readout, train_pred = _train_full(series, code, params, config)
    eta = series.eta
    postsyn = code.is_postsynaptic
    guard = (config.divergence_factor * series.hs) if series.hs > 0 else math.inf

    troughs = detect_troughs(eta)
    triggers = [i for i in troughs if n_train <= i < need - 1][::config.stride]

    onestep = np.zeros(need)
    onestep[:n_train] = train_pred
    overlay = np.full(need, np.nan)
    rec_t, rec_truth, rec_pred = [], [], []
    seg_rms = []
    diverged = False

    cursor = n_train - 1
    for trig in triggers:
        for t in range(cursor + 1, trig + 1):
            onestep[t] = _scalarize(readout.r @ x.x, frontend.frequency_domain)
            s_t = frontend.push(eta[t])
            if config.online_updates:
                readout = rls_update(readout, x.x, s_t)
            x = step(x, s_t, conn, params, postsyn)
        cursor = trig

        preds, div = free_run(
            x, readout, conn, params, horizon,
            frontend.frame, guard, postsyn,
        )
        diverged = diverged or div
        t_idx = trig + 1 + np.arange(horizon)
        mask = t_idx < need
        if np.any(mask):
            t_seg = t_idx[mask]
            p_seg = preds[mask]
            rec_t.append(t_seg)
            rec_truth.append(eta[t_seg])
            rec_pred.append(p_seg)
            seg_rms.append(compute_rms(p_seg, eta[t_seg]))
            overlay[t_seg] = p_seg

    if rec_t:
        trace_t = np.concatenate(rec_t) / rate
        trace_truth = np.concatenate(rec_truth)
        trace_pred = np.concatenate(rec_pred)
        rms = compute_rms(trace_pred, trace_truth)
    else:
        trace_t = np.array([])
        trace_truth = np.array([])
        trace_pred = np.array([])
        rms = math.nan

    display_pred = np.where(np.isnan(overlay), onestep, overlay)
    phases = tuple("train" if i < n_train else "predict" for i in range(need))
    return PredictionReport(
        code=str(code), alpha=params.alpha, rho=params.rho,
        beta_max=params.beta_max, hs=series.hs, tp=series.tp,
        rms=rms, per_segment_rms=tuple(seg_rms), n_segments=len(seg_rms),
        diverged=diverged, trace_t=trace_t, trace_truth=trace_truth,
        trace_pred=trace_pred,
        display_t=np.arange(need) / rate,
        display_truth=eta[:need].copy(),
        display_pred=display_pred,
        display_phase=phases,
    )


# ---------------------------------------------------------------------------
# parameter sweeps
# ---------------------------------------------------------------------------

def run_key(code: str, alpha: float, rho: float, beta: float,
            hs: float, tp: float) -> str:
    return "|".join([
        str(code), repr(float(alpha)), repr(float(rho)), repr(float(beta)),
        repr(float(hs)), repr(float(tp)),
    ])


def derive_seed(master_seed: int, key: str) -> int:
    digest = hashlib.sha256(f"{int(master_seed)}|{key}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _failed_report(code, alpha, rho, beta, hs, tp, message) -> PredictionReport:
    empty = np.array([])
    return PredictionReport(
        code=code, alpha=alpha, rho=rho, beta_max=beta, hs=hs, tp=tp,
        rms=math.nan, per_segment_rms=(), n_segments=0, diverged=True,
        trace_t=empty, trace_truth=empty, trace_pred=empty,
        display_t=empty, display_truth=empty, display_pred=empty,
        display_phase=(), error=message,
    )


def _sweep_task(payload) -> PredictionReport:
    series, code, alpha, rho, beta, config, seed = payload
    try:
        params = ReservoirParams(alpha=alpha, rho=rho, beta_max=beta,
                                 dt=1.0 / config.sample_rate, seed=seed)
        return evaluate(series, code, params, config)
    except WavechoError as exc:
        return _failed_report(code, alpha, rho, beta, series.hs, series.tp, str(exc))


def sweep(
    gauges: Sequence[GaugeSeries],
    codes: Sequence[str],
    grid: Sequence[float] = PARAMETER_GRID,
    config: Optional[ForecastConfig] = None,
    master_seed: int = 0,
    jobs: int = 1,
):
    """Cartesian product of codes x sea states x parameter lattice.

    Run order (and report order) is sorted by run key; per-run seeds derive
    from the master seed and the key, so results are independent of worker
    scheduling.  Failed runs come back as flagged reports.
    """
    if not gauges or not codes:
        raise ConfigurationError("sweep needs at least one gauge series and one code")
    config = config or ForecastConfig()
    by_state = {(s.hs, s.tp): s for s in gauges}
    tasks = []
    for code in codes:
        str(parse_code(code))
        for (hs, tp), series in by_state.items():
            for alpha, rho, beta in product(grid, grid, grid):
                key = run_key(code, alpha, rho, beta, hs, tp)
                tasks.append(
                    (key, (series, code, alpha, rho, beta, config,
                           derive_seed(master_seed, key)))
                )
    tasks.sort(key=lambda kv: kv[0])
    payloads = [payload for _, payload in tasks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_sweep_task, payloads, chunksize=4))
    else:
        reports = [_sweep_task(p) for p in payloads]
    return reports


def summarize(reports, n_boot: int = 10000, seed: int = 0):
    """Median RMS with bootstrap CI and IQR per (code, sea state)."""
    groups = {}
    for rep in reports:
        groups.setdefault((rep.code, rep.hs, rep.tp), []).append(rep.rms)
    rng = np.random.default_rng([int(seed), 11])
    rows = []
    for (code, hs, tp), values in sorted(groups.items()):
        vals = np.asarray(values, dtype=float)
        finite = vals[np.isfinite(vals)]
        if finite.size:
            med = float(np.median(finite))
            q1, q3 = (float(v) for v in np.percentile(finite, [25.0, 75.0]))
            idx = rng.integers(0, finite.size, size=(n_boot, finite.size))
            boot = np.median(finite[idx], axis=1)
            ci_lo, ci_hi = (float(v) for v in np.percentile(boot, [2.5, 97.5]))
        else:
            med = q1 = q3 = ci_lo = ci_hi = math.nan
        rows.append({
            "code": code, "hs": hs, "tp": tp, "median_rms": med,
            "q1": q1, "q3": q3, "ci_lo": ci_lo, "ci_hi": ci_hi,
            "n": vals.size, "n_failed": int(np.sum(~np.isfinite(vals))),
        })
    return rows
