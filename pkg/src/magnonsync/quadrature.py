"""Real quadrature representation of the linearized fluctuation dynamics.

The six fluctuation quadratures are ordered (dq1, dp1, dq2, dp2, dx, dy), with
q = (b^dag + b)/sqrt(2) and p = i(b^dag - b)/sqrt(2) for each mode. A complex
equation db = X*c + Y*c^dag maps onto the 2x2 real block
[[Re(X+Y), -Im(X-Y)], [Im(X+Y), Re(X-Y)]] acting on (q_c, p_c).
"""

import math

import numpy as np

from . import _kernels
from .model import CoefficientSet, MeanFieldState, SystemParams

QUADRATURE_ORDER = ("dq1", "dp1", "dq2", "dp2", "dx", "dy")


def coupling_block(x: complex, y: complex) -> np.ndarray:
    """Quadrature image of the complex-mode coupling db = x*c + y*c_dagger."""
    s = x + y
    d = x - y
    return np.array([[s.real, -d.imag], [s.imag, d.real]], dtype=np.float64)


def drift_matrix(coeffs: CoefficientSet) -> np.ndarray:
    """Assemble the 6x6 real drift matrix of the quadrature fluctuations.

    The two magnon blocks are built identically from their own (P, Q, R, S)
    and (U, W); the direct magnon-magnon blocks are exactly zero because the
    modes only talk through the cavity.
    """
    cf = np.array([coeffs.P1, coeffs.P2, coeffs.Q1, coeffs.Q2,
                   coeffs.R1, coeffs.R2, coeffs.S1, coeffs.S2,
                   coeffs.U1, coeffs.U2, coeffs.W1, coeffs.W2,
                   coeffs.T, coeffs.F1, coeffs.F2, coeffs.F3],
                  dtype=np.complex128)
    mat = np.empty((6, 6), dtype=np.float64)
    _kernels.drift_matrix(cf, mat)
    return mat


def diffusion_strengths(params: SystemParams,
                        cavity_bath: str = "thermal") -> tuple[float, float, float]:
    """Diagonal noise strengths (V1, V2, V3) of the input-noise correlations.

    Each magnon bath contributes V_i = gamma_i*(nbar_m + 1/2). The cavity
    strength follows the same thermal form by default; cavity_bath="vacuum"
    uses V3 = gammaC/2 instead, matching a vacuum cavity input.
    """
    if cavity_bath not in ("thermal", "vacuum"):
        raise ValueError(f"unknown cavity_bath {cavity_bath!r}")
    occ = params.nbar_m + 0.5
    v3 = params.gammaC * (occ if cavity_bath == "thermal" else 0.5)
    return params.gamma1 * occ, params.gamma2 * occ, v3


def diffusion_matrix(params: SystemParams,
                     cavity_bath: str = "thermal") -> np.ndarray:
    """Constant 6x6 diagonal diffusion matrix diag(V1, V1, V2, V2, V3, V3)."""
    v1, v2, v3 = diffusion_strengths(params, cavity_bath)
    return np.diag([v1, v1, v2, v2, v3, v3]).astype(np.float64)


def mean_quadratures(state: MeanFieldState) -> tuple[float, float, float,
                                                     float, float, float]:
    """Mean quadratures (qbar1, pbar1, qbar2, pbar2, xbar, ybar)."""
    rt2 = math.sqrt(2.0)
    return (rt2 * state.alpha1.real, rt2 * state.alpha1.imag,
            rt2 * state.alpha2.real, rt2 * state.alpha2.imag,
            rt2 * state.beta.real, rt2 * state.beta.imag)
