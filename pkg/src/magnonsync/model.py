"""Model parameters and closed-form expressions of the coupled magnon-cavity system.

Two Kerr-nonlinear magnon modes couple to a single driven microwave cavity mode
through beam-splitter interactions. The dynamics are written in an interaction
picture rotating at the drive frequencies, where the Kerr nonlinearity enters
through the secular factor A_i = 2i*K_i*t and the slowly varying phase C_i, and
the detunings enter through B_i = DeltaC - Delta_i and D_i = Delta_i. All rates
and frequencies are normalized to the first magnon drive amplitude.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the model, in units of the first drive amplitude.

    g1, g2: magnon-cavity coupling strengths
    K1, K2: Kerr coefficients
    Omega1, Omega2, OmegaC: magnon and cavity drive amplitudes
    Delta1, Delta2, DeltaC: magnon and cavity detunings from their drives
    gamma1, gamma2, gammaC: damping rates (must be positive)
    nbar_m: mean thermal occupation of the magnon baths (non-negative)
    """

    g1: float
    g2: float
    K1: float
    K2: float
    Omega1: float
    Omega2: float
    OmegaC: float
    Delta1: float
    Delta2: float
    DeltaC: float
    gamma1: float
    gamma2: float
    gammaC: float
    nbar_m: float

    _FIELDS = ("g1", "g2", "K1", "K2", "Omega1", "Omega2", "OmegaC",
               "Delta1", "Delta2", "DeltaC", "gamma1", "gamma2", "gammaC",
               "nbar_m")

    def __post_init__(self):
        for name in self._FIELDS:
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        for name in ("gamma1", "gamma2", "gammaC"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.nbar_m < 0.0:
            raise ValueError("nbar_m must be >= 0")

    def as_array(self) -> np.ndarray:
        """Packed float64 vector in the layout the compiled kernels expect."""
        return np.array([getattr(self, name) for name in self._FIELDS],
                        dtype=np.float64)


@dataclass(frozen=True)
class MeanFieldState:
    """Mean amplitudes of the three modes at time t (units of inverse Omega1)."""

    alpha1: complex
    alpha2: complex
    beta: complex
    t: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta"):
            z = complex(getattr(self, name))
            object.__setattr__(self, name, z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite")
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise ValueError("t must be finite and >= 0")


@dataclass(frozen=True)
class FramePhases:
    """Rotating-frame phase parameters B_i, C_i, D_i at a given mean field.

    B_i and D_i are set by the detunings alone; C_i is the Kerr phase
    K_i*(2|alpha_i|^2 + 1), the symmetrically ordered occupation evaluated at
    the mean amplitude.
    """

    B1: float
    B2: float
    C1: float
    C2: float
    D1: float
    D2: float


@dataclass(frozen=True)
class CoefficientSet:
    """Linearized-fluctuation coefficients evaluated at one mean-field point.

    P_i, Q_i couple each magnon fluctuation to itself and its conjugate;
    R_i, S_i couple it to the cavity fluctuation; U_i, W_i and T generate the
    cavity fluctuation; F1, F2, F3 are the inhomogeneous drives (diagnostic
    only, excluded from covariance propagation).
    """

    P1: complex
    P2: complex
    Q1: complex
    Q2: complex
    R1: complex
    R2: complex
    S1: complex
    S2: complex
    U1: complex
    U2: complex
    W1: complex
    W2: complex
    T: complex
    F1: complex
    F2: complex
    F3: complex
    t: float


def kerr_secular_factor(kerr: float, t: float) -> complex:
    """Secular Kerr factor 2i*K*t (purely imaginary, grows linearly in t)."""
    return 2j * kerr * t


def frame_phases(params: SystemParams, state: MeanFieldState) -> FramePhases:
    """Evaluate the rotating-frame phases at the current mean field."""
    return FramePhases(
        B1=params.DeltaC - params.Delta1,
        B2=params.DeltaC - params.Delta2,
        C1=params.K1 * (2.0 * abs(state.alpha1) ** 2 + 1.0),
        C2=params.K2 * (2.0 * abs(state.alpha2) ** 2 + 1.0),
        D1=params.Delta1,
        D2=params.Delta2,
    )


def langevin_drift(params: SystemParams, m1: complex, m1c: complex,
                   m2: complex, m2c: complex, a: complex, ac: complex,
                   t: float) -> tuple[complex, complex, complex]:
    """Deterministic drift of the operator equations of motion, as c-numbers.

    The daggered variables (m1c, m2c, ac) are independent arguments, which
    makes this function the reference for finite-difference Jacobians of the
    linearization: perturb one variable while holding its partner fixed. The
    Kerr phase C_i is evaluated from the (possibly non-conjugate) pair as
    K_i*(2*m_ic*m_i + 1).
    """
    d1, d2, da = _kernels.drift(
        params.as_array(), complex(m1), complex(m1c), complex(m2),
        complex(m2c), complex(a), complex(ac), float(t), False)
    return d1, d2, da


def mean_field_drift(params: SystemParams,
                     state: MeanFieldState) -> tuple[complex, complex, complex]:
    """Right-hand side of the noise-free mean-field equations.

    Returns (dalpha1/dt, dalpha2/dt, dbeta/dt). Non-finite amplitudes are
    propagated unchanged through the arithmetic so a caller can detect a
    diverging step from the output.
    """
    d1, d2, db = _kernels.drift(
        params.as_array(), state.alpha1, state.alpha1.conjugate(),
        state.alpha2, state.alpha2.conjugate(), state.beta,
        state.beta.conjugate(), state.t, True)
    return d1, d2, db


def linearization_coefficients(params: SystemParams,
                               state: MeanFieldState) -> CoefficientSet:
    """Evaluate every linearization coefficient at the given mean field."""
    cf = _kernels.coefficients(params.as_array(), state.alpha1, state.alpha2,
                               state.beta, state.t)
    k = _kernels
    return CoefficientSet(
        P1=cf[k.CF_P1], P2=cf[k.CF_P2],
        Q1=cf[k.CF_Q1], Q2=cf[k.CF_Q2],
        R1=cf[k.CF_R1], R2=cf[k.CF_R2],
        S1=cf[k.CF_S1], S2=cf[k.CF_S2],
        U1=cf[k.CF_U1], U2=cf[k.CF_U2],
        W1=cf[k.CF_W1], W2=cf[k.CF_W2],
        T=cf[k.CF_T],
        F1=cf[k.CF_F1], F2=cf[k.CF_F2], F3=cf[k.CF_F3],
        t=state.t,
    )
