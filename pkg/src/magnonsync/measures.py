"""Synchronization figures of merit for the two magnon modes.

Classical synchronization is the reciprocal mean-square difference of the mean
quadratures; its reciprocal epsC is carried alongside because the measure
diverges at perfect synchronization. The quantum measure S_q^phi is the
reciprocal of the phase-rotated fluctuation difference variance, evaluated in
closed form from the 6x6 covariance matrix, and is bounded by 1.
"""

import math

import numpy as np


class PhaseUndefined(ValueError):
    """A mode sits at the phase-space origin, so its phase has no value."""


class DenominatorNonpositive(ValueError):
    """The covariance combination in the measure is not positive."""


class EmptyWindow(ValueError):
    """No samples fall inside the requested averaging window."""


#: Amplitude below which a limit-cycle phase is treated as undefined.
PHASE_TOL = 1e-12


def wrap_phase(x: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(x, math.tau)
    if w <= -math.pi:
        w += math.tau
    return w


def classical_sync(qbar1: float, pbar1: float, qbar2: float,
                   pbar2: float) -> tuple[float, float]:
    """Mean-square quadrature difference epsC and its reciprocal S_c.

    epsC = ((qbar1-qbar2)^2 + (pbar1-pbar2)^2)/2; S_c = 1/epsC, reported as
    +inf at exact coincidence. Both values are always returned.
    """
    eps = 0.5 * ((qbar1 - qbar2) ** 2 + (pbar1 - pbar2) ** 2)
    sc = math.inf if eps == 0.0 else 1.0 / eps
    return eps, sc


def limit_cycle_phase(qbar1: float, pbar1: float, qbar2: float,
                      pbar2: float) -> tuple[float, float, float]:
    """Full-quadrant limit-cycle phases and their wrapped difference.

    Returns (phi1, phi2, phi2 - phi1 wrapped to (-pi, pi]). Raises
    PhaseUndefined if either mode has no amplitude (within PHASE_TOL).
    """
    if math.hypot(qbar1, pbar1) <= PHASE_TOL:
        raise PhaseUndefined("mode 1 has no limit-cycle amplitude")
    if math.hypot(qbar2, pbar2) <= PHASE_TOL:
        raise PhaseUndefined("mode 2 has no limit-cycle amplitude")
    phi1 = math.atan2(pbar1, qbar1)
    phi2 = math.atan2(pbar2, qbar2)
    return phi1, phi2, wrap_phase(phi2 - phi1)


def quantum_sync_phi(cov: np.ndarray, phi: float) -> float:
    """Quantum phase synchronization from the covariance matrix.

    S_q^phi = 2 / [C11+C22+C33+C44 + 2 sin(phi)(C23-C14) - 2 cos(phi)(C13+C24)]
    with 1-based indices into the (dq1, dp1, dq2, dp2, ...) ordering. At
    phi = 0 this reduces to the unrotated fluctuation measure. phi is wrapped
    to (-pi, pi] first, which makes the measure exactly 2*pi-periodic.
    """
    c = np.asarray(cov)
    phi = wrap_phase(phi)
    bracket = (c[0, 0] + c[1, 1] + c[2, 2] + c[3, 3]
               + 2.0 * math.sin(phi) * (c[1, 2] - c[0, 3])
               - 2.0 * math.cos(phi) * (c[0, 2] + c[1, 3]))
    if bracket <= 0.0:
        raise DenominatorNonpositive(
            f"covariance combination {bracket} is not positive")
    return 2.0 / bracket


def time_average(times, values, window_fraction: float) -> float:
    """Mean of the samples whose time lies in the final window_fraction of the span."""
    if not 0.0 < window_fraction <= 1.0:
        raise ValueError("window_fraction must be in (0, 1]")
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.size == 0:
        raise EmptyWindow("empty series")
    start = t[-1] - window_fraction * (t[-1] - t[0])
    mask = t >= start
    if not mask.any():
        raise EmptyWindow("no samples in the averaging window")
    return float(v[mask].mean())
