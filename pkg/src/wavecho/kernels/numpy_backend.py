"""Pure-numpy implementations of the hot kernels.

Vectorized twins of the numba backend; selected with WAVECHO_NUMBA=0.
All flume arrays are cell-centered with ``n`` cells unless noted; faces are
indexed 0..n with face j sitting between cells j-1 and j.
"""

import numpy as np

H_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# reservoir stepping
# ---------------------------------------------------------------------------

def reservoir_run(w, d, beta, x0, inputs, alpha, rho, dt, postsynaptic):
    """Euler-integrate the reservoir through ``inputs`` (T x M).

    Returns the N x T state history; column t is the state after input t.
    """
    n = w.shape[0]
    t_steps = inputs.shape[0]
    out = np.empty((n, t_steps))
    x = x0.copy()
    if postsynaptic:
        for t in range(t_steps):
            drive = rho * (w @ np.tanh(x)) + beta + d @ inputs[t]
            x = x + dt * (-alpha * x + drive)
            out[:, t] = x
    else:
        for t in range(t_steps):
            pre = rho * (w @ x) + beta + d @ inputs[t]
            x = x + dt * (-alpha * x + np.tanh(pre))
            out[:, t] = x
    return out


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------

def tridiag_solve(sub, diag, sup, rhs):
    """Thomas algorithm; sub[0] and sup[-1] are ignored."""
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - sub[i] * cp[i - 1]
        cp[i] = sup[i] / denom
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / denom
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


# ---------------------------------------------------------------------------
# reconstruction and fluxes
# ---------------------------------------------------------------------------

def _minmod(a, b):
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


def reconstruct_faces(qg):
    """Left/right interface values from a 3-ghost padded cell array.

    Fifth-order upwind-biased interpolation, falling back to minmod-limited
    second order wherever the high-order value leaves the local three-cell
    envelope (monotone profiles therefore gain no new extrema, while smooth
    crests keep the high-order value).
    """
    n = qg.shape[0] - 6
    j = np.arange(n + 1)
    ql = (2.0 * qg[j] - 13.0 * qg[j + 1] + 47.0 * qg[j + 2]
          + 27.0 * qg[j + 3] - 3.0 * qg[j + 4]) / 60.0
    qr = (-3.0 * qg[j + 1] + 27.0 * qg[j + 2] + 47.0 * qg[j + 3]
          - 13.0 * qg[j + 4] + 2.0 * qg[j + 5]) / 60.0

    lo_l = np.minimum(np.minimum(qg[j + 1], qg[j + 2]), qg[j + 3])
    hi_l = np.maximum(np.maximum(qg[j + 1], qg[j + 2]), qg[j + 3])
    bad_l = (ql < lo_l) | (ql > hi_l)
    qc = qg[j + 2]
    ql_lim = qc + 0.5 * _minmod(qc - qg[j + 1], qg[j + 3] - qc)
    ql = np.where(bad_l, ql_lim, ql)

    lo_r = np.minimum(np.minimum(qg[j + 2], qg[j + 3]), qg[j + 4])
    hi_r = np.maximum(np.maximum(qg[j + 2], qg[j + 3]), qg[j + 4])
    bad_r = (qr < lo_r) | (qr > hi_r)
    qc = qg[j + 3]
    qr_lim = qc - 0.5 * _minmod(qc - qg[j + 2], qg[j + 4] - qc)
    qr = np.where(bad_r, qr_lim, qr)
    return ql, qr


def hllc_faces(hl, ul, hr, ur, g):
    """HLLC flux for the shallow-water subset, full 0.5*g*H^2 pressure.

    Returns (mass flux, momentum flux) per face.  Depths must be positive.
    """
    cl = np.sqrt(g * hl)
    cr = np.sqrt(g * hr)
    u_star = 0.5 * (ul + ur) + cl - cr
    c_star = 0.5 * (cl + cr) + 0.25 * (ul - ur)
    sl = np.minimum(ul - cl, u_star - c_star)
    sr = np.maximum(ur + cr, u_star + c_star)
    num = sl * hr * (ur - sr) - sr * hl * (ul - sl)
    den = hr * (ur - sr) - hl * (ul - sl)
    s_star = num / den  # den <= -(hl*cl + hr*cr) < 0, never zero

    flm = hl * ul
    flp = hl * ul * ul + 0.5 * g * hl * hl
    frm = hr * ur
    frp = hr * ur * ur + 0.5 * g * hr * hr

    with np.errstate(divide="ignore", invalid="ignore"):
        h_star_l = hl * (sl - ul) / (sl - s_star)
        h_star_r = hr * (sr - ur) / (sr - s_star)
        fm_mid_l = flm + sl * (h_star_l - hl)
        fp_mid_l = flp + sl * (h_star_l * s_star - hl * ul)
        fm_mid_r = frm + sr * (h_star_r - hr)
        fp_mid_r = frp + sr * (h_star_r * s_star - hr * ur)

    fm = np.where(sl >= 0.0, flm,
                  np.where(sr <= 0.0, frm,
                           np.where(s_star >= 0.0, fm_mid_l, fm_mid_r)))
    fp = np.where(sl >= 0.0, flp,
                  np.where(sr <= 0.0, frp,
                           np.where(s_star >= 0.0, fp_mid_l, fp_mid_r)))
    return fm, fp


# ---------------------------------------------------------------------------
# dispersive momentum operator
# ---------------------------------------------------------------------------

def momentum_from_velocity(big_h, u, h, z, dx):
    """P = Hu + H(z^2/2 u_xx + z (hu)_xx); plain Hu at the two wall cells."""
    p = big_h * u
    hu = h * u
    inv = 1.0 / (dx * dx)
    uxx = (u[2:] - 2.0 * u[1:-1] + u[:-2]) * inv
    huxx = (hu[2:] - 2.0 * hu[1:-1] + hu[:-2]) * inv
    zc = z[1:-1]
    p[1:-1] += big_h[1:-1] * (0.5 * zc * zc * uxx + zc * huxx)
    return p


def velocity_from_momentum(big_h, p_mom, h, z, dx):
    """Invert the P(u) operator with a tridiagonal solve."""
    n = p_mom.shape[0]
    inv = 1.0 / (dx * dx)
    sub = np.zeros(n)
    diag = np.empty(n)
    sup = np.zeros(n)
    diag[0] = big_h[0]
    diag[-1] = big_h[-1]
    zc = z[1:-1]
    diag[1:-1] = big_h[1:-1] * (1.0 - (zc * zc + 2.0 * zc * h[1:-1]) * inv)
    sub[1:-1] = big_h[1:-1] * (0.5 * zc * zc + zc * h[:-2]) * inv
    sup[1:-1] = big_h[1:-1] * (0.5 * zc * zc + zc * h[2:]) * inv
    return tridiag_solve(sub, diag, sup, p_mom)


# ---------------------------------------------------------------------------
# full right-hand side
# ---------------------------------------------------------------------------

def _pad3(q, odd):
    out = np.empty(q.shape[0] + 6)
    out[3:-3] = q
    if odd:
        out[0], out[1], out[2] = -q[2], -q[1], -q[0]
        out[-3], out[-2], out[-1] = -q[-1], -q[-2], -q[-3]
    else:
        out[0], out[1], out[2] = q[2], q[1], q[0]
        out[-3], out[-2], out[-1] = q[-1], q[-2], q[-3]
    return out


def flume_rhs(big_h, p_mom, u, k, h, h_face, h_x, z, dx, g,
              n_manning, c_nu, nu_mol, wmk,
              enable_dispersion, enable_friction, enable_breaking):
    """Time derivatives (dH, dP, dk) of the flume state, plus an error flag.

    err = 1 signals a nonpositive reconstructed depth (drying).
    """
    n = u.shape[0]
    eta = big_h - h
    eta_g = _pad3(eta, False)
    u_g = _pad3(u, True)

    eta_l, eta_r = reconstruct_faces(eta_g)
    u_l, u_r = reconstruct_faces(u_g)
    hl = eta_l + h_face
    hr = eta_r + h_face
    err = 0
    if np.min(hl) <= 0.0 or np.min(hr) <= 0.0:
        err = 1
        hl = np.maximum(hl, H_FLOOR)
        hr = np.maximum(hr, H_FLOOR)

    fm, fp = hllc_faces(hl, u_l, hr, u_r, g)
    fp = fp - 0.5 * g * h_face * h_face

    inv_dx = 1.0 / dx
    d_fm = (fm[1:] - fm[:-1]) * inv_dx
    d_fp = (fp[1:] - fp[:-1]) * inv_dx
    bed = g * eta * h_x

    # second derivatives with one ghost ring (u odd at walls, h replicated)
    inv2 = inv_dx * inv_dx
    u_e = np.empty(n + 2)
    u_e[1:-1] = u
    u_e[0] = -u[0]
    u_e[-1] = -u[-1]
    h_e = np.empty(n + 2)
    h_e[1:-1] = h
    h_e[0] = h[0]
    h_e[-1] = h[-1]
    hu_e = h_e * u_e
    uxx = (u_e[2:] - 2.0 * u_e[1:-1] + u_e[:-2]) * inv2
    huxx = (hu_e[2:] - 2.0 * hu_e[1:-1] + hu_e[:-2]) * inv2

    if enable_dispersion:
        psi_p = 0.5 * z * z * uxx + z * huxx
        b_cell = (0.5 * z * z - h * h / 6.0) * h * uxx + (z + 0.5 * h) * h * huxx
        b_face = np.zeros(n + 1)
        b_face[1:-1] = 0.5 * (b_cell[:-1] + b_cell[1:])
        psi_c_div = (b_face[1:] - b_face[:-1]) * inv_dx
    else:
        psi_p = np.zeros(n)
        psi_c_div = np.zeros(n)

    d_big_h = -d_fm - psi_c_div + wmk
    d_p = -d_fp + bed - (u * psi_c_div + d_big_h * psi_p)

    if enable_friction:
        d_p = d_p - g * n_manning * n_manning * u * np.abs(u) / np.cbrt(big_h)

    kpos = np.maximum(k, 0.0)
    nu_t = c_nu * h * np.sqrt(kpos)
    if enable_breaking:
        visc_face = np.zeros(n + 1)
        visc_face[1:-1] = 0.5 * (nu_t[:-1] * big_h[:-1] + nu_t[1:] * big_h[1:])
        du_face = np.zeros(n + 1)
        du_face[1:-1] = (u[1:] - u[:-1]) * inv_dx
        d_p = d_p + (visc_face[1:] * du_face[1:] - visc_face[:-1] * du_face[:-1]) * inv_dx

    # TKE budget: upwind advection, destruction, molecular diffusion,
    # production where the reconstructed surface velocity is supercritical.
    k_e = np.empty(n + 2)
    k_e[1:-1] = k
    k_e[0] = k[0]
    k_e[-1] = k[-1]
    k_up = np.where(u > 0.0, k_e[1:-1] - k_e[:-2], k_e[2:] - k_e[1:-1]) * inv_dx
    adv = u * k_up
    c_d = c_nu ** 3
    destr = c_d * kpos * np.sqrt(kpos) / h
    diff = nu_mol * (k_e[2:] - 2.0 * k_e[1:-1] + k_e[:-2]) * inv2
    u_surf = u + 0.5 * (z * z - eta * eta) * uxx + (z - eta) * huxx
    uz_surf = -eta * uxx - huxx
    breaking = np.abs(u_surf) >= np.sqrt(g * big_h)
    prod = np.where(breaking, (h * h / np.sqrt(c_d)) * np.abs(uz_surf) ** 3, 0.0)
    d_k = -adv - destr + prod + diff

    return d_big_h, d_p, d_k, err
