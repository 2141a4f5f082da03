"""Self-contained verification checks behind the ``wavecho verify`` command.

Each check re-derives its expected values through an independent route
(matrix-power iteration, explicit DFT matrix, coupled pair equations, batch
regression) rather than trusting the code path it exercises.
"""

import numpy as np

from . import topology as topo
from .flume import FlumeConfig, initial_state, rk2_step, stable_dt
from .flume.solver import _geometry
from .flume.spectrum import frequency_grid
from .kernels import momentum_from_velocity
from .readout import batch_ridge, init_readout, rls_update
from .reservoir import ReservoirParams, make_state, run_sequence
from .spectral import incremental_update, window_transform


def _power_radius(w, squarings=48):
    b = np.array(w, dtype=float)
    norm = np.linalg.norm(b)
    if norm == 0.0:
        return 0.0
    b /= norm
    log_scale = np.log(norm)
    exponent = 1
    for _ in range(squarings):
        b = b @ b
        norm = np.linalg.norm(b)
        if norm == 0.0:
            return 0.0
        b /= norm
        log_scale = 2.0 * log_scale + np.log(norm)
        exponent *= 2
    return float(np.exp(log_scale / exponent))


def check_spectral_radius(quick: bool):
    worst = 0.0
    codes = ("0000", "0001", "1110", "1111") if quick else topo.ALL_CODES
    for text in codes:
        conn = topo.build_connectivity(text, seed=0)
        worst = max(worst, abs(_power_radius(conn.w) - 1.0))
    return worst < 1e-8, f"max |rho-1| = {worst:.2e} over {len(codes)} codes"


def check_structured_blocks(quick: bool):
    spec = topo.TopologySpec(num_fields=4)
    w_ee, w_ei, w_ie, w_ii = topo.build_tonotopic_connectivity(spec, seed=0)
    diag_ok = (np.count_nonzero(w_ei - np.diag(np.diag(w_ei))) == 0
               and np.count_nonzero(w_ii - np.diag(np.diag(w_ii))) == 0)
    nc = spec.columns_per_field
    belt_ok = all(
        np.count_nonzero(w_ee[i * nc:(i + 1) * nc, j * nc:(j + 1) * nc]) == 0
        for i in range(1, 4) for j in range(1, 4) if i != j
    )
    return diag_ok and belt_ok, "W_ei/W_ii diagonal, belt-belt blocks empty"


def check_pair_equivalence(quick: bool):
    steps = 300 if quick else 1000
    spec = topo.TopologySpec(num_fields=1)
    w_ee, w_ei, w_ie, w_ii = topo.build_tonotopic_connectivity(spec, seed=1)
    tau_m = 2.0
    combined = topo.assemble_combined(w_ee, w_ei, w_ie, w_ii, tau_m)
    sigma = topo.spectral_radius(combined)
    conn = topo.Connectivity(
        w=combined / sigma,
        d=topo.build_input_matrix(topo.parse_code("1110"), 32, 32, seed=1, tau_m=tau_m),
        code="1110", seed=1,
        excitatory=np.arange(32) < 16,
        field_index=np.zeros(32, dtype=int),
        column_index=np.tile(np.arange(16), 2),
    )
    p = ReservoirParams(alpha=1.0 / tau_m, rho=0.5, beta_max=0.3, dt=1.0, seed=1)
    init = make_state(conn, p)
    rng = np.random.default_rng(2)
    inputs = rng.uniform(-1, 1, size=(steps, 32))
    combined_traj = run_sequence(init, inputs, conn, p, postsynaptic=True)

    drive = inputs @ conn.d.T * tau_m
    u = np.zeros(16)
    v = np.zeros(16)
    rho_eff = p.rho / sigma
    worst = 0.0
    for t in range(steps):
        du = (-u + rho_eff * (w_ee @ np.tanh(u) - w_ei @ np.tanh(v))
              + tau_m * init.biases[:16] + drive[t, :16]) / tau_m
        dv = (-v + rho_eff * (w_ie @ np.tanh(u) - w_ii @ np.tanh(v))
              + tau_m * init.biases[16:] + drive[t, 16:]) / tau_m
        u = u + p.dt * du
        v = v + p.dt * dv
        worst = max(worst, float(np.max(np.abs(combined_traj[:16, t] - u))),
                    float(np.max(np.abs(combined_traj[16:, t] - v))))
    return worst < 1e-12, f"max pair deviation = {worst:.2e} over {steps} steps"


def check_sliding_dft(quick: bool):
    updates = 2000 if quick else 10_000
    f = 16
    n = np.arange(f)
    dft = np.exp(-2j * np.pi * np.outer(n, n) / f)
    rng = np.random.default_rng(3)
    frame = window_transform(rng.normal(size=f))
    worst_dev = 0.0
    worst_parseval = 0.0
    for _ in range(updates):
        frame = incremental_update(frame, rng.normal())
        worst_dev = max(worst_dev,
                        float(np.max(np.abs(frame.coeffs - dft @ frame.window))))
        lhs = float(np.sum(frame.window ** 2))
        rhs = float(np.sum(np.abs(frame.coeffs) ** 2) / f)
        worst_parseval = max(worst_parseval, abs(lhs - rhs))
    ok = worst_dev < 1e-9 and worst_parseval < 1e-9
    return ok, f"dft dev {worst_dev:.2e}, parseval dev {worst_parseval:.2e}"


def check_recursive_regression(quick: bool):
    steps = 300 if quick else 1000
    window = 100
    rng = np.random.default_rng(4)
    n = 24
    xs = rng.normal(size=(steps, n))
    ss = rng.normal(size=(steps, 2))
    plain = init_readout(n, 2, ridge=1e-5)
    windowed = init_readout(n, 2, ridge=1e-5, window=window)
    for x, s in zip(xs, ss):
        plain = rls_update(plain, x, s)
        windowed = rls_update(windowed, x, s)
    full = batch_ridge(xs.T, ss.T, 1e-5)
    trail = batch_ridge(xs[-window:].T, ss[-window:].T, 1e-5)
    e1 = np.linalg.norm(plain.r - full) / np.linalg.norm(full)
    e2 = np.linalg.norm(windowed.r - trail) / np.linalg.norm(trail)
    return e1 < 1e-8 and e2 < 1e-7, f"rls vs batch {e1:.2e}, windowed {e2:.2e}"


def check_lake_at_rest(quick: bool):
    steps = 500 if quick else 2000
    cfg = FlumeConfig(slope=1.0 / 20.0, enable_wavemaker=False)
    state = initial_state(cfg)
    for _ in range(steps):
        state = rk2_step(state, cfg, None)
    worst = float(np.max(np.abs(state.eta)))
    return worst < 1e-12, f"max |eta| = {worst:.2e} after {steps} steps"


def check_mass_conservation(quick: bool):
    steps = 300 if quick else 1000
    cfg = FlumeConfig(enable_wavemaker=False, enable_sponge=False)
    state = initial_state(cfg)
    x, _, h, _, _, _, _ = _geometry(cfg)
    state.eta[:] = 0.5 * np.exp(-((x - 2000.0) / 150.0) ** 2)
    state.big_h = h + state.eta
    state.p_mom = momentum_from_velocity(state.big_h, state.u, h,
                                         cfg.z_alpha_coeff * h, cfg.dx)
    mass0 = float(np.sum(state.big_h) * cfg.dx)
    for _ in range(steps):
        state = rk2_step(state, cfg, None)
    drift = abs(float(np.sum(state.big_h) * cfg.dx) - mass0) / mass0
    return drift < 1e-10, f"relative drift = {drift:.2e} over {steps} steps"


def check_time_step(quick: bool):
    cfg = FlumeConfig()
    dt = stable_dt(initial_state(cfg), cfg)
    expect = 5.0 / (2.0 * np.sqrt(9.81 * 30.0))
    return abs(dt - expect) < 1e-9, f"dt at rest = {dt:.6f} s"


def check_spectrum_bookkeeping(quick: bool):
    freqs, df = frequency_grid(7200.0)
    ok = (round(df, 6) == 0.000139 and freqs.size == 921
          and freqs[0] == 1.0 / 30.0)
    k = np.pi / 30.0
    f_cut = np.sqrt(9.81 * k * np.tanh(np.pi)) / (2.0 * np.pi)
    ok = ok and abs(f_cut - 1.0 / 6.21) < 5e-5
    return ok, f"df = {df:.6g}, bins = {freqs.size}, kh=pi cutoff {f_cut:.6g} Hz"


CHECKS = (
    ("spectral-radius", check_spectral_radius),
    ("structured-blocks", check_structured_blocks),
    ("pair-equivalence", check_pair_equivalence),
    ("sliding-dft", check_sliding_dft),
    ("recursive-regression", check_recursive_regression),
    ("lake-at-rest", check_lake_at_rest),
    ("mass-conservation", check_mass_conservation),
    ("time-step", check_time_step),
    ("spectrum-bookkeeping", check_spectrum_bookkeeping),
)


def run_checks(quick: bool = False, stream=None):
    """Run every check; returns the number of failures."""
    import sys
    stream = stream or sys.stdout
    failures = 0
    for name, fn in CHECKS:
        ok, detail = fn(quick)
        failures += 0 if ok else 1
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    return failures
