"""Independent reference implementations used to check the package.

Everything here deliberately avoids the code paths it verifies: the spectral
radius comes from matrix-power iteration instead of an eigensolver, the DFT
from an explicit coefficient matrix instead of an FFT, the Riemann flux from
the exact two-wave solution, and the structured reservoir from the coupled
excitatory/inhibitory pair equations instead of the combined matrix.
"""

import numpy as np

GRAVITY = 9.81


def power_radius(w, squarings=48):
    """Spectral radius via repeated squaring of the matrix power.

    rho = lim ||W^m||^(1/m); repeated squaring reaches m = 2^squarings with
    per-step Frobenius normalization so the limit is read off a log scale.
    Converges in modulus regardless of complex or tied eigenvalues.
    """
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


def dft_matrix(f):
    n = np.arange(f)
    return np.exp(-2j * np.pi * np.outer(n, n) / f)


def direct_dft(samples):
    """O(F^2) forward DFT through the explicit coefficient matrix."""
    samples = np.asarray(samples, dtype=float)
    return dft_matrix(samples.size) @ samples


def airy_wavenumber(omega, depth, g=GRAVITY):
    """Bisection solve of omega^2 = g k tanh(k h)."""
    target = omega * omega / g
    lo, hi = 1e-12, 10.0 + target * 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * np.tanh(mid * depth) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def exact_riemann_swe(hl, ul, hr, ur, g=GRAVITY):
    """Exact wet-bed shallow-water Riemann solution sampled at x/t = 0.

    Returns (h, u) of the region containing the interface.
    """
    cl = np.sqrt(g * hl)
    cr = np.sqrt(g * hr)

    def wave_fn(h, hk, ck):
        if h <= hk:
            return 2.0 * (np.sqrt(g * h) - ck)
        return (h - hk) * np.sqrt(0.5 * g * (h + hk) / (h * hk))

    def residual(h):
        return wave_fn(h, hl, cl) + wave_fn(h, hr, cr) + ur - ul

    lo, hi = 1e-12, 10.0 * max(hl, hr) + 1.0
    while residual(hi) < 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    h_star = 0.5 * (lo + hi)
    u_star = 0.5 * (ul + ur) + 0.5 * (wave_fn(h_star, hr, cr) - wave_fn(h_star, hl, cl))
    c_star = np.sqrt(g * h_star)

    # left wave
    if h_star > hl:  # shock
        s_l = ul - cl * np.sqrt(0.5 * h_star * (h_star + hl)) / hl
        if s_l >= 0.0:
            return hl, ul
    else:  # rarefaction
        head = ul - cl
        tail = u_star - c_star
        if head >= 0.0:
            return hl, ul
        if tail > 0.0:  # interface inside the left fan
            c = (ul + 2.0 * cl) / 3.0
            return c * c / g, c

    # right wave
    if h_star > hr:  # shock
        s_r = ur + cr * np.sqrt(0.5 * h_star * (h_star + hr)) / hr
        if s_r <= 0.0:
            return hr, ur
    else:  # rarefaction
        head = ur + cr
        tail = u_star + c_star
        if head <= 0.0:
            return hr, ur
        if tail < 0.0:  # interface inside the right fan
            c = (2.0 * cr - ur) / 3.0
            return c * c / g, ur - 2.0 * (cr - c)

    return h_star, u_star


def swe_flux(h, u, g=GRAVITY):
    return h * u, h * u * u + 0.5 * g * h * h


def pair_trajectory(w_ee, w_ei, w_ie, w_ii, rho_eff, tau_m,
                    beta_e, beta_i, drive_e, drive_i, dt, steps,
                    u0=None, v0=None):
    """Euler integration of the coupled excitatory/inhibitory pair equations.

    tau u' = -u + rho_eff (W_ee tanh u - W_ei tanh v) + beta_e + drive_e(t)
    tau v' = -v + rho_eff (W_ie tanh u - W_ii tanh v) + beta_i + drive_i(t)

    drive_e/drive_i are (steps, half) arrays.  Returns the stacked [u; v]
    trajectory, one column per step.
    """
    half = w_ee.shape[0]
    u = np.zeros(half) if u0 is None else u0.copy()
    v = np.zeros(half) if v0 is None else v0.copy()
    out = np.empty((2 * half, steps))
    for t in range(steps):
        du = (-u + rho_eff * (w_ee @ np.tanh(u) - w_ei @ np.tanh(v))
              + beta_e + drive_e[t]) / tau_m
        dv = (-v + rho_eff * (w_ie @ np.tanh(u) - w_ii @ np.tanh(v))
              + beta_i + drive_i[t]) / tau_m
        u = u + dt * du
        v = v + dt * dv
        out[:half, t] = u
        out[half:, t] = v
    return out


def zero_crossing_hs(eta):
    """Significant wave height: mean of the highest third of zero-crossing
    wave heights."""
    eta = np.asarray(eta, dtype=float)
    eta = eta - eta.mean()
    up = np.nonzero((eta[:-1] < 0.0) & (eta[1:] >= 0.0))[0]
    if up.size < 2:
        return 0.0
    heights = []
    for a, b in zip(up[:-1], up[1:]):
        seg = eta[a:b + 1]
        heights.append(seg.max() - seg.min())
    heights = np.sort(np.array(heights))[::-1]
    top = max(1, heights.size // 3)
    return float(np.mean(heights[:top]))
