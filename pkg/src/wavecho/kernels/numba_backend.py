"""Numba @njit implementations of the hot kernels.

Loop-level twins of ``numpy_backend``; selected by default when numba
imports (see WAVECHO_NUMBA).  Results agree with the numpy backend to
rounding; the test suite cross-checks the two.
"""

import numpy as np
from numba import njit

H_FLOOR = 1e-12


@njit(cache=True)
def reservoir_run(w, d, beta, x0, inputs, alpha, rho, dt, postsynaptic):
    n = w.shape[0]
    t_steps = inputs.shape[0]
    out = np.empty((n, t_steps))
    x = x0.copy()
    for t in range(t_steps):
        if postsynaptic:
            drive = rho * np.dot(w, np.tanh(x)) + beta + np.dot(d, inputs[t])
            x = x + dt * (-alpha * x + drive)
        else:
            pre = rho * np.dot(w, x) + beta + np.dot(d, inputs[t])
            x = x + dt * (-alpha * x + np.tanh(pre))
        out[:, t] = x
    return out


@njit(cache=True)
def tridiag_solve(sub, diag, sup, rhs):
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
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@njit(cache=True)
def _minmod(a, b):
    if a > 0.0 and b > 0.0:
        return min(a, b)
    if a < 0.0 and b < 0.0:
        return max(a, b)
    return 0.0


@njit(cache=True)
def reconstruct_faces(qg):
    n = qg.shape[0] - 6
    ql = np.empty(n + 1)
    qr = np.empty(n + 1)
    for j in range(n + 1):
        vl = (2.0 * qg[j] - 13.0 * qg[j + 1] + 47.0 * qg[j + 2]
              + 27.0 * qg[j + 3] - 3.0 * qg[j + 4]) / 60.0
        vr = (-3.0 * qg[j + 1] + 27.0 * qg[j + 2] + 47.0 * qg[j + 3]
              - 13.0 * qg[j + 4] + 2.0 * qg[j + 5]) / 60.0
        lo_l = min(min(qg[j + 1], qg[j + 2]), qg[j + 3])
        hi_l = max(max(qg[j + 1], qg[j + 2]), qg[j + 3])
        if vl < lo_l or vl > hi_l:
            qc = qg[j + 2]
            vl = qc + 0.5 * _minmod(qc - qg[j + 1], qg[j + 3] - qc)
        lo_r = min(min(qg[j + 2], qg[j + 3]), qg[j + 4])
        hi_r = max(max(qg[j + 2], qg[j + 3]), qg[j + 4])
        if vr < lo_r or vr > hi_r:
            qc = qg[j + 3]
            vr = qc - 0.5 * _minmod(qc - qg[j + 2], qg[j + 4] - qc)
        ql[j] = vl
        qr[j] = vr
    return ql, qr


@njit(cache=True)
def hllc_faces(hl, ul, hr, ur, g):
    n = hl.shape[0]
    fm = np.empty(n)
    fp = np.empty(n)
    for j in range(n):
        cl = np.sqrt(g * hl[j])
        cr = np.sqrt(g * hr[j])
        u_star = 0.5 * (ul[j] + ur[j]) + cl - cr
        c_star = 0.5 * (cl + cr) + 0.25 * (ul[j] - ur[j])
        sl = min(ul[j] - cl, u_star - c_star)
        sr = max(ur[j] + cr, u_star + c_star)
        num = sl * hr[j] * (ur[j] - sr) - sr * hl[j] * (ul[j] - sl)
        den = hr[j] * (ur[j] - sr) - hl[j] * (ul[j] - sl)
        s_star = num / den
        flm = hl[j] * ul[j]
        flp = hl[j] * ul[j] * ul[j] + 0.5 * g * hl[j] * hl[j]
        frm = hr[j] * ur[j]
        frp = hr[j] * ur[j] * ur[j] + 0.5 * g * hr[j] * hr[j]
        if sl >= 0.0:
            fm[j] = flm
            fp[j] = flp
        elif sr <= 0.0:
            fm[j] = frm
            fp[j] = frp
        elif s_star >= 0.0:
            h_star = hl[j] * (sl - ul[j]) / (sl - s_star)
            fm[j] = flm + sl * (h_star - hl[j])
            fp[j] = flp + sl * (h_star * s_star - hl[j] * ul[j])
        else:
            h_star = hr[j] * (sr - ur[j]) / (sr - s_star)
            fm[j] = frm + sr * (h_star - hr[j])
            fp[j] = frp + sr * (h_star * s_star - hr[j] * ur[j])
    return fm, fp


@njit(cache=True)
def momentum_from_velocity(big_h, u, h, z, dx):
    n = u.shape[0]
    p = np.empty(n)
    inv2 = 1.0 / (dx * dx)
    p[0] = big_h[0] * u[0]
    p[n - 1] = big_h[n - 1] * u[n - 1]
    for i in range(1, n - 1):
        uxx = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv2
        huxx = (h[i + 1] * u[i + 1] - 2.0 * h[i] * u[i] + h[i - 1] * u[i - 1]) * inv2
        p[i] = big_h[i] * u[i] + big_h[i] * (0.5 * z[i] * z[i] * uxx + z[i] * huxx)
    return p


@njit(cache=True)
def velocity_from_momentum(big_h, p_mom, h, z, dx):
    n = p_mom.shape[0]
    inv2 = 1.0 / (dx * dx)
    sub = np.zeros(n)
    diag = np.empty(n)
    sup = np.zeros(n)
    diag[0] = big_h[0]
    diag[n - 1] = big_h[n - 1]
    for i in range(1, n - 1):
        zc = z[i]
        diag[i] = big_h[i] * (1.0 - (zc * zc + 2.0 * zc * h[i]) * inv2)
        sub[i] = big_h[i] * (0.5 * zc * zc + zc * h[i - 1]) * inv2
        sup[i] = big_h[i] * (0.5 * zc * zc + zc * h[i + 1]) * inv2
    return tridiag_solve(sub, diag, sup, p_mom)


@njit(cache=True)
def _pad3(q, odd):
    n = q.shape[0]
    out = np.empty(n + 6)
    for i in range(n):
        out[i + 3] = q[i]
    if odd:
        out[0] = -q[2]
        out[1] = -q[1]
        out[2] = -q[0]
        out[n + 3] = -q[n - 1]
        out[n + 4] = -q[n - 2]
        out[n + 5] = -q[n - 3]
    else:
        out[0] = q[2]
        out[1] = q[1]
        out[2] = q[0]
        out[n + 3] = q[n - 1]
        out[n + 4] = q[n - 2]
        out[n + 5] = q[n - 3]
    return out


@njit(cache=True)
def flume_rhs(big_h, p_mom, u, k, h, h_face, h_x, z, dx, g,
              n_manning, c_nu, nu_mol, wmk,
              enable_dispersion, enable_friction, enable_breaking):
    n = u.shape[0]
    eta = big_h - h
    eta_g = _pad3(eta, False)
    u_g = _pad3(u, True)

    eta_l, eta_r = reconstruct_faces(eta_g)
    u_l, u_r = reconstruct_faces(u_g)
    hl = eta_l + h_face
    hr = eta_r + h_face
    err = 0
    for j in range(n + 1):
        if hl[j] <= 0.0:
            hl[j] = H_FLOOR
            err = 1
        if hr[j] <= 0.0:
            hr[j] = H_FLOOR
            err = 1

    fm, fp = hllc_faces(hl, u_l, hr, u_r, g)
    for j in range(n + 1):
        fp[j] = fp[j] - 0.5 * g * h_face[j] * h_face[j]

    inv_dx = 1.0 / dx
    inv2 = inv_dx * inv_dx

    uxx = np.empty(n)
    huxx = np.empty(n)
    for i in range(n):
        um = -u[0] if i == 0 else u[i - 1]
        up = -u[n - 1] if i == n - 1 else u[i + 1]
        hm = h[0] if i == 0 else h[i - 1]
        hp = h[n - 1] if i == n - 1 else h[i + 1]
        uxx[i] = (up - 2.0 * u[i] + um) * inv2
        huxx[i] = (hp * up - 2.0 * h[i] * u[i] + hm * um) * inv2

    psi_p = np.zeros(n)
    psi_c_div = np.zeros(n)
    if enable_dispersion:
        b_cell = np.empty(n)
        for i in range(n):
            psi_p[i] = 0.5 * z[i] * z[i] * uxx[i] + z[i] * huxx[i]
            b_cell[i] = ((0.5 * z[i] * z[i] - h[i] * h[i] / 6.0) * h[i] * uxx[i]
                         + (z[i] + 0.5 * h[i]) * h[i] * huxx[i])
        b_face = np.zeros(n + 1)
        for j in range(1, n):
            b_face[j] = 0.5 * (b_cell[j - 1] + b_cell[j])
        for i in range(n):
            psi_c_div[i] = (b_face[i + 1] - b_face[i]) * inv_dx

    d_big_h = np.empty(n)
    d_p = np.empty(n)
    for i in range(n):
        d_big_h[i] = -(fm[i + 1] - fm[i]) * inv_dx - psi_c_div[i] + wmk[i]
        d_p[i] = (-(fp[i + 1] - fp[i]) * inv_dx + g * eta[i] * h_x[i]
                  - (u[i] * psi_c_div[i] + d_big_h[i] * psi_p[i]))
        if enable_friction:
            d_p[i] -= g * n_manning * n_manning * u[i] * abs(u[i]) / np.cbrt(big_h[i])

    nu_t = np.empty(n)
    for i in range(n):
        kp = k[i] if k[i] > 0.0 else 0.0
        nu_t[i] = c_nu * h[i] * np.sqrt(kp)
    if enable_breaking:
        visc_face = np.zeros(n + 1)
        du_face = np.zeros(n + 1)
        for j in range(1, n):
            visc_face[j] = 0.5 * (nu_t[j - 1] * big_h[j - 1] + nu_t[j] * big_h[j])
            du_face[j] = (u[j] - u[j - 1]) * inv_dx
        for i in range(n):
            d_p[i] += (visc_face[i + 1] * du_face[i + 1]
                       - visc_face[i] * du_face[i]) * inv_dx

    c_d = c_nu ** 3
    sqrt_cd = np.sqrt(c_d)
    d_k = np.empty(n)
    for i in range(n):
        km = k[0] if i == 0 else k[i - 1]
        kp_ = k[n - 1] if i == n - 1 else k[i + 1]
        if u[i] > 0.0:
            k_up = (k[i] - km) * inv_dx
        else:
            k_up = (kp_ - k[i]) * inv_dx
        adv = u[i] * k_up
        kpos = k[i] if k[i] > 0.0 else 0.0
        destr = c_d * kpos * np.sqrt(kpos) / h[i]
        diff = nu_mol * (kp_ - 2.0 * k[i] + km) * inv2
        u_surf = (u[i] + 0.5 * (z[i] * z[i] - eta[i] * eta[i]) * uxx[i]
                  + (z[i] - eta[i]) * huxx[i])
        uz_surf = -eta[i] * uxx[i] - huxx[i]
        prod = 0.0
        if abs(u_surf) >= np.sqrt(g * big_h[i]):
            prod = (h[i] * h[i] / sqrt_cd) * abs(uz_surf) ** 3
        d_k[i] = -adv - destr + prod + diff

    return d_big_h, d_p, d_k, err
