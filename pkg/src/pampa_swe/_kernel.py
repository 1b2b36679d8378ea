"""Compiled evaluation of the stage right-hand side.

This is a loop-level transcription of :func:`pampa_swe.scheme.evaluate_rhs`
for both models.  The NumPy implementation stays the reference; the test
suite checks that both agree to round-off on random and near-dry data.
States are handled as three scalars (h, hu, hv) with hv = 0 for the
Saint-Venant model.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

DRY_H = 1e-14
H0 = 1e-4
EPS_VEL = 5e-9
EPS_H_CAP = 1e-13
HO_DRY_H = 1e-10
SONIC_REL_TOL = 1e-8
GUARD_REL = 1e-14
STEADY_C = 10.0
STEADY_KAPPA = 20.0
STEADY_THRESHOLD = 1e-3

KIND_SAINT_VENANT = 0
KIND_ROTATING = 1
QUAD_SC_III = 0
QUAD_IIIA = 1
ORDER_BLENDED = 0
ORDER_LOW = 1
ORDER_UNLIMITED = 2


@njit(cache=True, inline="always")
def _vel(h, q):
    if h <= DRY_H:
        return 0.0
    s = h / H0
    if s > 1.0:
        s = 1.0
    blend = (2.0 * s - 3.0) * s * s + 1.0
    if h >= H0:
        blend = 0.0
    return q * h / (h * h + blend * EPS_VEL)


@njit(cache=True, inline="always")
def _speed(g, h, hu):
    if h < 0.0:
        h = 0.0
    return abs(_vel(h, hu)) + math.sqrt(g * h)


@njit(cache=True, inline="always")
def _flux(g, h, hu, hv):
    u = _vel(h, hu)
    v = _vel(h, hv)
    return hu, hu * u + 0.5 * g * h * h, hu * v


@njit(cache=True, inline="always")
def _extra(kind, g, manning, f0, beta, h, hu, hv, x):
    """Source without the bathymetry term: (0, s1, s2)."""
    if kind == KIND_ROTATING:
        f = f0 + beta * x
        return 0.0, f * hv, -f * hu
    if manning == 0.0:
        return 0.0, 0.0, 0.0
    u = _vel(h, hu)
    if h > DRY_H:
        inv = math.exp(-math.log(h) / 3.0)
    else:
        inv = 0.0
    return 0.0, -g * manning * manning * abs(u) * u * inv, 0.0


@njit(cache=True, inline="always")
def _eta(h_avg, h_target):
    eps = h_avg if h_avg < EPS_H_CAP else EPS_H_CAP
    denom = h_avg - h_target
    if h_target < eps and denom > 0.0:
        e = (h_avg - eps) / denom
        if e < 0.0:
            return 0.0
        if e > 1.0:
            return 1.0
        return e
    return 1.0


@njit(cache=True, inline="always")
def _ratio_bound(budget, delta, scale):
    d = abs(delta)
    if d <= GUARD_REL * abs(scale):
        return 1.0
    if budget < 0.0:
        budget = 0.0
    r = budget / d
    if r > 1.0:
        return 1.0
    return r


@njit(cache=True, inline="always")
def _sign_ratio(lam, tol):
    if lam > tol:
        return 1.0
    if lam < -tol:
        return 0.0
    return 0.5


@njit(cache=True, inline="always")
def _jplus_apply(kind, g, h, hu, hv, d0, d1, d2):
    """J+ d with J+ = R diag(ratio) R^-1 at state (h, hu, hv)."""
    u = _vel(h, hu)
    c = math.sqrt(g * h)
    tol = SONIC_REL_TOL * max(1.0, abs(u) + c)
    inv2c = 0.5 / c
    a1 = ((u + c) * d0 - d1) * inv2c * _sign_ratio(u - c, tol)
    a3 = (-(u - c) * d0 + d1) * inv2c * _sign_ratio(u + c, tol)
    if kind == KIND_ROTATING:
        v = _vel(h, hv)
        a2 = (-v * d0 + d2) * _sign_ratio(u, tol)
        return a1 + a3, a1 * (u - c) + a3 * (u + c), (a1 + a3) * v + a2
    return a1 + a3, a1 * (u - c) + a3 * (u + c), 0.0


@njit(cache=True)
def rhs_kernel(points, averages, Bp, Ba, x_nodes, dx, length, kind, g, manning, f0, beta,
               periodic, left_mask, left_vals, right_mask, right_vals, quad, order, use_oe, dt):
    nv = points.shape[0]
    N = averages.shape[1]

    # ghost layer on cell averages
    A = np.zeros((3, N + 2))
    BA = np.empty(N + 2)
    for k in range(nv):
        for c in range(N):
            A[k, c + 1] = averages[k, c]
    for c in range(N):
        BA[c + 1] = Ba[c]
    if periodic:
        for k in range(nv):
            A[k, 0] = averages[k, N - 1]
            A[k, N + 1] = averages[k, 0]
        BA[0] = Ba[N - 1]
        BA[N + 1] = Ba[0]
    else:
        for k in range(nv):
            A[k, 0] = left_vals[k] if left_mask[k] else averages[k, 0]
            A[k, N + 1] = right_vals[k] if right_mask[k] else averages[k, N - 1]
        BA[0] = Ba[0]
        BA[N + 1] = Ba[N - 1]
    P = np.zeros((3, N + 1))
    for k in range(nv):
        for j in range(N + 1):
            P[k, j] = points[k, j]

    # reconstruction, sources, local global-flux samples
    G0 = np.empty((3, N))
    GM = np.empty((3, N))
    G1 = np.empty((3, N))
    DRH = np.empty((3, N))
    DRF2 = np.empty(N)
    MID = np.empty((3, N))
    for c in range(N):
        hl, hul, hvl = P[0, c], P[1, c], P[2, c]
        hr, hur, hvr = P[0, c + 1], P[1, c + 1], P[2, c + 1]
        hb, hub, hvb = A[0, c + 1], A[1, c + 1], A[2, c + 1]
        mh = 1.5 * hb - 0.25 * (hl + hr)
        mhu = 1.5 * hub - 0.25 * (hul + hur)
        mhv = 1.5 * hvb - 0.25 * (hvl + hvr)
        e = _eta(hb, mh)
        mh, mhu, mhv = hb + e * (mh - hb), hub + e * (mhu - hub), hvb + e * (mhv - hvb)
        qh = 0.1875 * hl + 1.125 * hb - 0.3125 * hr
        qhu = 0.1875 * hul + 1.125 * hub - 0.3125 * hur
        qhv = 0.1875 * hvl + 1.125 * hvb - 0.3125 * hvr
        e = _eta(hb, qh)
        qh, qhu, qhv = hb + e * (qh - hb), hub + e * (qhu - hub), hvb + e * (qhv - hvb)
        MID[0, c], MID[1, c], MID[2, c] = mh, mhu, mhv

        bl, bb, br = Bp[c], Ba[c], Bp[c + 1]
        bx0 = (-4.0 * bl + 6.0 * bb - 2.0 * br) / dx
        bxq = (-2.5 * bl + 3.0 * bb - 0.5 * br) / dx
        bxm = (br - bl) / dx
        bx1 = (2.0 * bl - 6.0 * bb + 4.0 * br) / dx
        x0 = x_nodes[c]
        s00, s01, s02 = _extra(kind, g, manning, f0, beta, hl, hul, hvl, x0)
        sq0, sq1, sq2 = _extra(kind, g, manning, f0, beta, qh, qhu, qhv, x0 + 0.25 * dx)
        sm0, sm1, sm2 = _extra(kind, g, manning, f0, beta, mh, mhu, mhv, x0 + 0.5 * dx)
        s10, s11, s12 = _extra(kind, g, manning, f0, beta, hr, hur, hvr, x0 + dx)
        s01 = s01 - g * hl * bx0
        sq1 = sq1 - g * qh * bxq
        sm1 = sm1 - g * mh * bxm
        s11 = s11 - g * hr * bx1
        if quad == QUAD_SC_III:
            h0_ = dx * (s00 + 4.0 * sq0 + sm0) / 12.0
            h1_ = dx * (s01 + 4.0 * sq1 + sm1) / 12.0
            h2_ = dx * (s02 + 4.0 * sq2 + sm2) / 12.0
        else:
            h0_ = dx * (5.0 / 24.0 * s00 + 1.0 / 3.0 * sm0 - 1.0 / 24.0 * s10)
            h1_ = dx * (5.0 / 24.0 * s01 + 1.0 / 3.0 * sm1 - 1.0 / 24.0 * s11)
            h2_ = dx * (5.0 / 24.0 * s02 + 1.0 / 3.0 * sm2 - 1.0 / 24.0 * s12)
        f0_ = dx * (s00 + 4.0 * sm0 + s10) / 6.0
        f1_ = dx * (s01 + 4.0 * sm1 + s11) / 6.0
        f2_ = dx * (s02 + 4.0 * sm2 + s12) / 6.0
        DRH[0, c], DRH[1, c], DRH[2, c] = h0_, h1_, h2_
        DRF2[c] = f1_
        a, b, d = _flux(g, hl, hul, hvl)
        G0[0, c], G0[1, c], G0[2, c] = a, b, d
        a, b, d = _flux(g, mh, mhu, mhv)
        GM[0, c], GM[1, c], GM[2, c] = a - h0_, b - h1_, d - h2_
        a, b, d = _flux(g, hr, hur, hvr)
        G1[0, c], G1[1, c], G1[2, c] = a - f0_, b - f1_, d - f2_

    # velocities of extended averages
    UA = np.empty(N + 2)
    VA = np.empty(N + 2)
    SA = np.empty(N + 2)
    for c in range(N + 2):
        UA[c] = _vel(A[0, c], A[1, c])
        VA[c] = _vel(A[0, c], A[2, c])
        SA[c] = _speed(g, A[0, c], A[1, c])

    # hydrostatic interface states and LLF fluxes at nodes
    HP = np.empty(N + 1)
    HM = np.empty(N + 1)
    BPL = np.empty(N + 1)
    BMI = np.empty(N + 1)
    ALPHA = np.empty(N + 1)
    F = np.empty((3, N + 1))
    for j in range(N + 1):
        bmax = max(BA[j + 1], BA[j])
        wr = A[0, j + 1] + BA[j + 1]
        wl = A[0, j] + BA[j]
        bp = min(wr, bmax)
        bm = min(wl, bmax)
        hp = wr - bp
        hm = wl - bm
        up, vp = UA[j + 1], VA[j + 1]
        um, vm = UA[j], VA[j]
        qp, rp = hp * up, hp * vp
        qm, rm = hm * um, hm * vm
        al = max(max(_speed(g, hp, qp), _speed(g, hm, qm)), max(SA[j], SA[j + 1]))
        fp0, fp1, fp2 = _flux(g, hp, qp, rp)
        fm0, fm1, fm2 = _flux(g, hm, qm, rm)
        F[0, j] = 0.5 * (fp0 + fm0) - 0.5 * al * (hp - hm)
        F[1, j] = 0.5 * (fp1 + fm1) - 0.5 * al * (qp - qm)
        F[2, j] = 0.5 * (fp2 + fm2) - 0.5 * al * (rp - rm)
        HP[j], HM[j], BPL[j], BMI[j], ALPHA[j] = hp, hm, bp, bm, al

    # low order cell fluxes
    LL = np.empty((3, N))
    LR = np.empty((3, N))
    for c in range(N):
        hb = A[0, c + 1]
        bb = BA[c + 1]
        xm = 0.5 * (x_nodes[c] + x_nodes[c + 1])
        sa0, sa1, sa2 = _extra(kind, g, manning, f0, beta, hb, A[1, c + 1], A[2, c + 1], xm)
        hp = HP[c]
        sp0, sp1, sp2 = _extra(kind, g, manning, f0, beta, hp, hp * UA[c + 1], hp * VA[c + 1],
                               x_nodes[c])
        hm = HM[c + 1]
        sm0, sm1, sm2 = _extra(kind, g, manning, f0, beta, hm, hm * UA[c + 1], hm * VA[c + 1],
                               x_nodes[c + 1])
        corr_l = g * 0.5 * (hb + hp) * (bb - BPL[c])
        corr_r = g * 0.5 * (hm + hb) * (BMI[c + 1] - bb)
        LL[0, c] = F[0, c] + 0.25 * dx * (sa0 + sp0) - DRH[0, c]
        LL[1, c] = F[1, c] - corr_l + 0.25 * dx * (sa1 + sp1) - DRH[1, c]
        LL[2, c] = F[2, c] + 0.25 * dx * (sa2 + sp2) - DRH[2, c]
        LR[0, c] = F[0, c + 1] - 0.25 * dx * (sa0 + sm0) - DRH[0, c]
        LR[1, c] = F[1, c + 1] + corr_r - 0.25 * dx * (sa1 + sm1) - DRH[1, c]
        LR[2, c] = F[2, c + 1] - 0.25 * dx * (sa2 + sm2) - DRH[2, c]

    # low order residuals at nodes
    RL = np.empty((3, N + 1))
    RR = np.empty((3, N + 1))
    QLHM = np.empty(N + 1)
    QLAL = np.empty(N + 1)
    QRHP = np.empty(N + 1)
    QRAL = np.empty(N + 1)
    for j in range(N + 1):
        h, hu, hv = P[0, j], P[1, j], P[2, j]
        bn = Bp[j]
        xj = x_nodes[j]
        un = _vel(h, hu)
        vn = _vel(h, hv)
        sn = _speed(g, h, hu)
        fn0, fn1, fn2 = _flux(g, h, hu, hv)
        en0, en1, en2 = _extra(kind, g, manning, f0, beta, h, hu, hv, xj)
        wn = h + bn
        # x_{j-1/4}: '+' node side, '-' cell side (extended cell j)
        bmax = max(BA[j], bn)
        bpl = min(wn, bmax)
        bmi = min(A[0, j] + BA[j], bmax)
        hp = wn - bpl
        hm = A[0, j] + BA[j] - bmi
        qp, rp = hp * un, hp * vn
        qm, rm = hm * UA[j], hm * VA[j]
        al = max(max(_speed(g, hp, qp), _speed(g, hm, qm)), max(sn, SA[j]))
        fp0, fp1, fp2 = _flux(g, hp, qp, rp)
        fm0, fm1, fm2 = _flux(g, hm, qm, rm)
        l0 = 0.5 * (fp0 + fm0) - 0.5 * al * (hp - hm)
        l1 = 0.5 * (fp1 + fm1) - 0.5 * al * (qp - qm)
        l2 = 0.5 * (fp2 + fm2) - 0.5 * al * (rp - rm)
        e0, e1, e2 = _extra(kind, g, manning, f0, beta, hp, qp, rp, xj - 0.25 * dx)
        RL[0, j] = fn0 - l0 - 0.125 * dx * (en0 + e0)
        RL[1, j] = fn1 - l1 + g * 0.5 * (h + hp) * (bn - bpl) - 0.125 * dx * (en1 + e1)
        RL[2, j] = fn2 - l2 - 0.125 * dx * (en2 + e2)
        QLHM[j], QLAL[j] = hm, al
        # x_{j+1/4}: '+' cell side (extended cell j+1), '-' node side
        bmax = max(BA[j + 1], bn)
        bpl = min(A[0, j + 1] + BA[j + 1], bmax)
        bmi = min(wn, bmax)
        hp = A[0, j + 1] + BA[j + 1] - bpl
        hm = wn - bmi
        qp, rp = hp * UA[j + 1], hp * VA[j + 1]
        qm, rm = hm * un, hm * vn
        al = max(max(_speed(g, hp, qp), _speed(g, hm, qm)), max(sn, SA[j + 1]))
        fp0, fp1, fp2 = _flux(g, hp, qp, rp)
        fm0, fm1, fm2 = _flux(g, hm, qm, rm)
        l0 = 0.5 * (fp0 + fm0) - 0.5 * al * (hp - hm)
        l1 = 0.5 * (fp1 + fm1) - 0.5 * al * (qp - qm)
        l2 = 0.5 * (fp2 + fm2) - 0.5 * al * (rp - rm)
        e0, e1, e2 = _extra(kind, g, manning, f0, beta, hm, qm, rm, xj + 0.25 * dx)
        RR[0, j] = l0 - fn0 - 0.125 * dx * (e0 + en0)
        RR[1, j] = l1 - fn1 + g * 0.5 * (hm + h) * (bmi - bn) - 0.125 * dx * (e1 + en1)
        RR[2, j] = l2 - fn2 - 0.125 * dx * (e2 + en2)
        QRHP[j], QRAL[j] = hp, al

    # high order residuals
    HL = np.zeros((3, N + 1))
    HR = np.zeros((3, N + 1))
    WET = np.empty(N + 1, dtype=np.bool_)
    for j in range(N + 1):
        dp0 = dp1 = dp2 = 0.0
        dm0 = dm1 = dm2 = 0.0
        cl = j - 1
        cr = j
        if periodic:
            if cl < 0:
                cl = N - 1
            if cr > N - 1:
                cr = 0
        if cl >= 0:
            dp0 = (G0[0, cl] - 4.0 * GM[0, cl] + 3.0 * G1[0, cl]) / dx
            dp1 = (G0[1, cl] - 4.0 * GM[1, cl] + 3.0 * G1[1, cl]) / dx
            dp2 = (G0[2, cl] - 4.0 * GM[2, cl] + 3.0 * G1[2, cl]) / dx
        if cr <= N - 1:
            dm0 = (-3.0 * G0[0, cr] + 4.0 * GM[0, cr] - G1[0, cr]) / dx
            dm1 = (-3.0 * G0[1, cr] + 4.0 * GM[1, cr] - G1[1, cr]) / dx
            dm2 = (-3.0 * G0[2, cr] + 4.0 * GM[2, cr] - G1[2, cr]) / dx
        h = P[0, j]
        WET[j] = h > HO_DRY_H
        if WET[j]:
            a0, a1, a2 = _jplus_apply(kind, g, h, P[1, j], P[2, j], dp0, dp1, dp2)
            HL[0, j], HL[1, j], HL[2, j] = 0.5 * dx * a0, 0.5 * dx * a1, 0.5 * dx * a2
            b0, b1, b2 = _jplus_apply(kind, g, h, P[1, j], P[2, j], dm0, dm1, dm2)
            HR[0, j] = 0.5 * dx * (dm0 - b0)
            HR[1, j] = 0.5 * dx * (dm1 - b1)
            HR[2, j] = 0.5 * dx * (dm2 - b2)

    # blending coefficients
    TN = np.empty(N + 1)
    TC = np.empty(N)
    TOE = np.ones(N)
    TLS = np.empty(N + 1)
    TRS = np.empty(N + 1)
    if order == ORDER_LOW:
        TN[:] = 0.0
        TC[:] = 0.0
        TLS[:] = 0.0
        TRS[:] = 0.0
    elif order == ORDER_UNLIMITED:
        TN[:] = 1.0
        TC[:] = 1.0
        for j in range(N + 1):
            TLS[j] = 1.0 if WET[j] else 0.0
            TRS[j] = TLS[j]
    else:
        THL = np.empty(N + 1)
        THR = np.empty(N + 1)
        for j in range(N + 1):
            dg1 = P[1, j] - F[0, j]
            sc = abs(P[1, j]) + abs(F[0, j])
            TN[j] = min(_ratio_bound(0.5 * HP[j] * (ALPHA[j] - UA[j + 1]), dg1, sc),
                        _ratio_bound(0.5 * HM[j] * (ALPHA[j] + UA[j]), dg1, sc))
            dl = HL[0, j] - RL[0, j]
            dr = HR[0, j] - RR[0, j]
            sc = abs(RL[0, j]) + abs(HL[0, j]) + abs(RR[0, j]) + abs(HR[0, j])
            THL[j] = _ratio_bound(0.5 * QLHM[j] * (QLAL[j] + UA[j]), dl, sc)
            THR[j] = _ratio_bound(0.5 * QRHP[j] * (QRAL[j] - UA[j + 1]), dr, sc)
        if use_oe and dt > 0.0:
            # steady indicator from the second global flux component
            R2 = 0.0
            msum = 0.0
            for c in range(N):
                msum += averages[0, c]
            for c in range(N):
                g2l = G0[1, c] - R2
                g2m = GM[1, c] - R2
                g2r = G1[1, c] - R2
                R2 = R2 + DRF2[c]
                den = max(max(abs(g2l), abs(g2m)), abs(g2r))
                Hc = 0.0
                if den >= 1e-14:
                    phi = (g2r - g2l) / dx * length / den
                    z = abs(STEADY_C * phi)
                    if z > 0.0:
                        Hc = 1.0 / (1.0 + z ** (-STEADY_KAPPA))
                if Hc <= STEADY_THRESHOLD:
                    TOE[c] = 1.0
                else:
                    TOE[c] = -1.0  # filled below
            mean = dx * msum / length
            norm = 0.0
            for j in range(N + 1):
                norm = max(norm, abs(P[0, j] - mean))
            for c in range(N):
                hl, hb, hr = P[0, c], A[0, c + 1], P[0, c + 1]
                qa = 3.0 * hl - 6.0 * hb + 3.0 * hr
                qb = -4.0 * hl + 6.0 * hb - 2.0 * hr
                if qa != 0.0:
                    xs = -qb / (2.0 * qa)
                    if 0.0 < xs < 1.0:
                        norm = max(norm, abs(hl + qb * xs + qa * xs * xs - mean))
            if norm > 0.0:
                J = np.zeros(N + 1)
                for j in range(1, N):
                    c = j
                    hl, hb, hr = P[0, c - 1], A[0, c], P[0, c]
                    d_right_end = 2.0 * hl - 6.0 * hb + 4.0 * hr
                    curv_l = 6.0 * hl - 12.0 * hb + 6.0 * hr
                    hl2, hb2, hr2 = P[0, c], A[0, c + 1], P[0, c + 1]
                    d_left_end = -4.0 * hl2 + 6.0 * hb2 - 2.0 * hr2
                    curv_r = 6.0 * hl2 - 12.0 * hb2 + 6.0 * hr2
                    J[j] = abs(d_left_end - d_right_end) + abs(curv_r - curv_l)
                if periodic:
                    hl, hb, hr = P[0, N - 1], A[0, N], P[0, N]
                    d_right_end = 2.0 * hl - 6.0 * hb + 4.0 * hr
                    curv_l = 6.0 * hl - 12.0 * hb + 6.0 * hr
                    hl2, hb2, hr2 = P[0, 0], A[0, 1], P[0, 1]
                    d_left_end = -4.0 * hl2 + 6.0 * hb2 - 2.0 * hr2
                    curv_r = 6.0 * hl2 - 12.0 * hb2 + 6.0 * hr2
                    J[0] = abs(d_left_end - d_right_end) + abs(curv_r - curv_l)
                    J[N] = J[0]
                for c in range(N):
                    if TOE[c] < 0.0:
                        sig = (J[c] + J[c + 1]) / (2.0 * norm)
                        al = max(max(_speed(g, P[0, c], P[1, c]), SA[c + 1]),
                                 _speed(g, P[0, c + 1], P[1, c + 1]))
                        TOE[c] = math.exp(-al * dt * sig / dx)
            else:
                for c in range(N):
                    TOE[c] = 1.0
        # fold oscillation factor
        for j in range(1, N):
            TN[j] = min(TN[j], min(TOE[j - 1], TOE[j]))
        if periodic:
            e = min(TOE[0], TOE[N - 1])
            TN[0] = min(TN[0], e)
            TN[N] = min(TN[N], e)
        else:
            TN[0] = min(TN[0], TOE[0])
            TN[N] = min(TN[N], TOE[N - 1])
        for c in range(N):
            TC[c] = min(min(THR[c], THL[c + 1]), TOE[c])
        for j in range(1, N + 1):
            TLS[j] = TC[j - 1]
        for j in range(N):
            TRS[j] = TC[j]
        if periodic:
            TLS[0] = TC[N - 1]
            TRS[N] = TC[0]
        else:
            TLS[0] = min(THL[0], TOE[0])
            TRS[N] = min(THR[N], TOE[N - 1])
        for j in range(N + 1):
            if not WET[j]:
                TLS[j] = 0.0
                TRS[j] = 0.0

    d_avg = np.empty((nv, N))
    for k in range(nv):
        for c in range(N):
            fl = LL[k, c] + TN[c] * (G0[k, c] - LL[k, c])
            fr = LR[k, c] + TN[c + 1] * (G1[k, c] - LR[k, c])
            d_avg[k, c] = -(fr - fl) / dx
    d_pts = np.empty((nv, N + 1))
    for k in range(nv):
        for j in range(N + 1):
            pl = RL[k, j] + TLS[j] * (HL[k, j] - RL[k, j])
            pr = RR[k, j] + TRS[j] * (HR[k, j] - RR[k, j])
            d_pts[k, j] = -(2.0 / dx) * (pl + pr)
    return d_pts, d_avg, TN, TC, TOE
