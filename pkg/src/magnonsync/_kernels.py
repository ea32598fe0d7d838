"""Compiled numerical core shared by the model layer and the propagation loop.

Everything here operates on a packed float64 parameter vector (see PV_* index
constants) so the hot RK4 loop stays inside nopython code. The public modules
wrap these kernels in friendlier signatures; tests exercise the wrappers.
"""

import math

import numpy as np
from numba import njit

# Packed parameter vector layout. Entries 0..13 mirror SystemParams; 14..16
# hold the precomputed diffusion strengths (V1, V2, V3).
PV_G1, PV_G2 = 0, 1
PV_K1, PV_K2 = 2, 3
PV_OM1, PV_OM2, PV_OMC = 4, 5, 6
PV_DL1, PV_DL2, PV_DLC = 7, 8, 9
PV_GAM1, PV_GAM2, PV_GAMC = 10, 11, 12
PV_NBAR = 13
PV_V1, PV_V2, PV_V3 = 14, 15, 16

# State vector layout for the joint propagation: 6 mean-field reals followed by
# the 21 upper-triangle covariance entries; an optional 6-entry fluctuation
# first-moment block is appended when the inhomogeneous drive is tracked.
N_MEAN = 6
N_TRI = 21
N_STATE = N_MEAN + N_TRI

# Ordering of the complex coefficient vector returned by coefficients().
CF_P1, CF_P2 = 0, 1
CF_Q1, CF_Q2 = 2, 3
CF_R1, CF_R2 = 4, 5
CF_S1, CF_S2 = 6, 7
CF_U1, CF_U2 = 8, 9
CF_W1, CF_W2 = 10, 11
CF_T = 12
CF_F1, CF_F2, CF_F3 = 13, 14, 15
N_COEFF = 16


@njit(cache=True)
def drift(pv, m1, m1c, m2, m2c, a, ac, t, conjugate_pair):
    """Deterministic part of the operator equations of motion, as c-numbers.

    The daggered variables (m1c, m2c, ac) are treated as independent inputs so
    the same expression serves the mean-field right-hand side (pass the actual
    conjugates, conjugate_pair=True) and directional derivatives for Jacobian
    checks (perturb one variable at a time, conjugate_pair=False).

    Returns (dm1, dm2, da).
    """
    dlc = pv[PV_DLC]
    edc = np.exp(1j * dlc * t)
    da = -0.5 * pv[PV_GAMC] * a - 1j * pv[PV_OMC] * edc
    dm = complex(0.0, 0.0)
    dm1 = complex(0.0, 0.0)
    for i in range(2):
        g = pv[PV_G1 + i]
        kerr = pv[PV_K1 + i]
        om = pv[PV_OM1 + i]
        dl = pv[PV_DL1 + i]
        gam = pv[PV_GAM1 + i]
        if i == 0:
            m, mc = m1, m1c
        else:
            m, mc = m2, m2c

        sec = 2j * kerr * t
        occ = mc * m  # complex unless mc is the true conjugate
        cph = kerr * (2.0 * occ + 1.0)
        b = dlc - dl
        eb = np.exp(1j * t * (b - cph))
        ed = np.exp(1j * t * (dl + cph))
        if conjugate_pair:
            ebm = eb.conjugate()
            edm = ed.conjugate()
        else:
            ebm = np.exp(-1j * t * (b - cph))
            edm = np.exp(-1j * t * (dl + cph))

        dm = -0.5 * gam * m + 1j * (
            g * ac * sec * eb * m * m
            - om * ed
            - om * mc * sec * ed * m
            - g * ebm * a
            - g * mc * sec * ebm * m * a
            + om * sec * edm * m * m
        )
        if i == 0:
            dm1 = dm
        da = da - 1j * g * eb * m

    return dm1, dm, da


@njit(cache=True)
def coefficients(pv, a1, a2, b, t):
    """Linearization coefficients of the fluctuation equations at a mean field.

    Returns a complex vector ordered per the CF_* constants: the self and
    cross couplings (P, Q, R, S) of each magnon fluctuation, the cavity
    couplings (U, W, T), and the inhomogeneous drives (F1, F2, F3).
    """
    out = np.empty(N_COEFF, dtype=np.complex128)
    bc = b.conjugate()
    dlc = pv[PV_DLC]
    for i in range(2):
        g = pv[PV_G1 + i]
        kerr = pv[PV_K1 + i]
        om = pv[PV_OM1 + i]
        dl = pv[PV_DL1 + i]
        gam = pv[PV_GAM1 + i]
        al = a1 if i == 0 else a2
        alc = al.conjugate()

        sec = 2j * kerr * t
        n = al.real * al.real + al.imag * al.imag
        cph = kerr * (2.0 * n + 1.0)
        phb = t * (dlc - dl - cph)
        phd = t * (dl + cph)
        eb = complex(math.cos(phb), math.sin(phb))
        ed = complex(math.cos(phd), math.sin(phd))
        ebm = eb.conjugate()
        edm = ed.conjugate()
        sn = sec * n

        out[CF_P1 + i] = -0.5 * gam + 1j * (
            sec * g * al * bc * (2.0 - sn) * eb
            - sec * om * alc * ed
            - g * sec * alc * b * ebm
            - sec * om * alc * (1.0 + sn) * ed
            + sec * om * al * (2.0 - sn) * edm
            - sec * g * alc * b * (1.0 + sn) * ebm
        )
        out[CF_Q1 + i] = 1j * (
            -sec * sec * g * al * al * al * bc * eb
            - sec * om * al * ed
            - sec * g * al * b * ebm
            - sec * om * al * (1.0 + sn) * ed
            - sec * sec * om * al * al * al * edm
            - sec * g * al * b * (1.0 + sn) * ebm
        )
        out[CF_R1 + i] = -1j * g * (1.0 + sn) * ebm
        out[CF_S1 + i] = 1j * g * sec * al * al * eb
        out[CF_U1 + i] = -1j * g * (1.0 - sn) * eb
        out[CF_W1 + i] = 1j * sec * g * al * al * eb
        out[CF_F1 + i] = 1j * (
            sec * g * al * al * bc * eb
            - om * ed
            - g * b * ebm
            - sec * om * n * ed
            + sec * om * n * edm
            - sec * g * n * b * ebm
        )

    out[CF_T] = complex(-0.5 * pv[PV_GAMC], 0.0)
    # Inhomogeneous cavity drive, kept in the truncated form it is defined in
    # (bare g1 term, no second-magnon contribution); it never feeds the
    # covariance propagation.
    k1 = pv[PV_K1]
    n1 = a1.real * a1.real + a1.imag * a1.imag
    ph1 = t * (dlc - pv[PV_DL1] - k1 * (2.0 * n1 + 1.0))
    eb1 = complex(math.cos(ph1), math.sin(ph1))
    edc = complex(math.cos(dlc * t), math.sin(dlc * t))
    out[CF_F3] = -1j * (pv[PV_G1] * eb1 - 1j * pv[PV_OMC] * edc)
    return out


@njit(cache=True)
def _fill_block(mat, r, c, x, y):
    # Quadrature image of d(mode) = x*other + y*other_dagger.
    s = x + y
    d = x - y
    mat[r, c] = s.real
    mat[r, c + 1] = -d.imag
    mat[r + 1, c] = s.imag
    mat[r + 1, c + 1] = d.real


@njit(cache=True)
def drift_matrix(cf, mat):
    """Fill the 6x6 real quadrature drift matrix from the coefficient vector."""
    _fill_block(mat, 0, 0, cf[CF_P1], cf[CF_Q1])
    _fill_block(mat, 2, 2, cf[CF_P2], cf[CF_Q2])
    _fill_block(mat, 0, 4, cf[CF_R1], cf[CF_S1])
    _fill_block(mat, 2, 4, cf[CF_R2], cf[CF_S2])
    _fill_block(mat, 4, 0, cf[CF_U1], cf[CF_W1])
    _fill_block(mat, 4, 2, cf[CF_U2], cf[CF_W2])
    _fill_block(mat, 4, 4, cf[CF_T], complex(0.0, 0.0))
    for r in range(2):
        for c in range(2):
            mat[r, 2 + c] = 0.0
            mat[2 + r, c] = 0.0


@njit(cache=True)
def rhs(t, y, pv, include_f, dy):
    """Joint right-hand side: mean field, covariance triangle, optional drive.

    y holds (Re/Im alpha1, Re/Im alpha2, Re/Im beta), then the upper triangle
    of the symmetrized covariance in row-major order, then optionally the
    6-entry fluctuation first moment driven by (F1, F2, F3).
    """
    a1 = complex(y[0], y[1])
    a2 = complex(y[2], y[3])
    bt = complex(y[4], y[5])

    d1, d2, db = drift(pv, a1, a1.conjugate(), a2, a2.conjugate(),
                       bt, bt.conjugate(), t, True)
    dy[0] = d1.real
    dy[1] = d1.imag
    dy[2] = d2.real
    dy[3] = d2.imag
    dy[4] = db.real
    dy[5] = db.imag

    cf = coefficients(pv, a1, a2, bt, t)
    mat = np.empty((6, 6), dtype=np.float64)
    drift_matrix(cf, mat)

    cov = np.empty((6, 6), dtype=np.float64)
    k = N_MEAN
    for i in range(6):
        for j in range(i, 6):
            cov[i, j] = y[k]
            cov[j, i] = y[k]
            k += 1

    # dC = M C + C M^T + D, evaluated on the upper triangle only; the result
    # is symmetric by construction so nothing is lost.
    k = N_MEAN
    for i in range(6):
        for j in range(i, 6):
            s = 0.0
            for l in range(6):
                s += mat[i, l] * cov[l, j] + cov[i, l] * mat[j, l]
            if i == j:
                s += pv[PV_V1 + (i // 2)]
            dy[k] = s
            k += 1

    if include_f:
        rt2 = math.sqrt(2.0)
        for i in range(6):
            s = 0.0
            for l in range(6):
                s += mat[i, l] * y[N_STATE + l]
            dy[N_STATE + i] = s
        dy[N_STATE + 0] += rt2 * cf[CF_F1].real
        dy[N_STATE + 1] += rt2 * cf[CF_F1].imag
        dy[N_STATE + 2] += rt2 * cf[CF_F2].real
        dy[N_STATE + 3] += rt2 * cf[CF_F2].imag
        dy[N_STATE + 4] += rt2 * cf[CF_F3].real
        dy[N_STATE + 5] += rt2 * cf[CF_F3].imag


@njit(cache=True)
def propagate_loop(y0, t0, dt, n_steps, decimation, pv, include_f,
                   rec_t, rec_y):
    """Fixed-step RK4 over the joint state with decimated record output.

    Records land in rec_t / rec_y (preallocated); record 0 is the initial
    state. Returns (status, n_records, step_of_failure) where status 0 means
    every emitted record was finite and 1 flags a non-finite record.
    """
    n = y0.size
    y = y0.copy()
    k1 = np.empty(n, dtype=np.float64)
    k2 = np.empty(n, dtype=np.float64)
    k3 = np.empty(n, dtype=np.float64)
    k4 = np.empty(n, dtype=np.float64)
    yt = np.empty(n, dtype=np.float64)

    rec_t[0] = t0
    for i in range(n):
        rec_y[0, i] = y[i]
    m = 1

    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(n_steps):
        t = t0 + step * dt
        rhs(t, y, pv, include_f, k1)
        for i in range(n):
            yt[i] = y[i] + half * k1[i]
        rhs(t + half, yt, pv, include_f, k2)
        for i in range(n):
            yt[i] = y[i] + half * k2[i]
        rhs(t + half, yt, pv, include_f, k3)
        for i in range(n):
            yt[i] = y[i] + dt * k3[i]
        rhs(t + dt, yt, pv, include_f, k4)
        for i in range(n):
            y[i] = y[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])

        if (step + 1) % decimation == 0 or step + 1 == n_steps:
            rec_t[m] = t0 + (step + 1) * dt
            ok = True
            for i in range(n):
                rec_y[m, i] = y[i]
                if not np.isfinite(y[i]):
                    ok = False
            m += 1
            if not ok:
                return 1, m, step + 1

    return 0, m, n_steps
