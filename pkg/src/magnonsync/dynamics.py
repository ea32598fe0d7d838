"""Joint time integration of the mean field and the fluctuation covariance.

The nonlinear mean-field amplitudes and the 6x6 symmetrized covariance matrix
advance together under fixed-step RK4, with the drift matrix re-evaluated at
every substage from the current mean field. The covariance is stored as its 21
upper-triangle entries, which enforces symmetry structurally. The inhomogeneous
fluctuation drive cancels identically in the covariance equation and is only
tracked (optionally) as a first-moment diagnostic.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels, measures
from .model import SystemParams
from .quadrature import diffusion_strengths

#: Row/column indices of the packed covariance upper triangle.
TRI_ROWS = tuple(i for i in range(6) for _ in range(i, 6))
TRI_COLS = tuple(j for i in range(6) for j in range(i, 6))


class StepDiverged(RuntimeError):
    """An integration step produced a non-finite state component."""


class ConfigInvalid(ValueError):
    """A scenario configuration violates its preconditions."""


def pack_covariance(cov: np.ndarray) -> np.ndarray:
    """Upper triangle of a symmetric 6x6 matrix as a flat 21-vector."""
    c = np.asarray(cov, dtype=np.float64)
    return c[list(TRI_ROWS), list(TRI_COLS)].copy()


def unpack_covariance(tri: np.ndarray) -> np.ndarray:
    """Symmetric 6x6 matrix from its packed upper triangle."""
    cov = np.empty((6, 6), dtype=np.float64)
    cov[list(TRI_ROWS), list(TRI_COLS)] = tri
    cov[list(TRI_COLS), list(TRI_ROWS)] = tri
    return cov


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run one propagation.

    init_cov selects the initial covariance: "thermal" puts the magnons in
    equilibrium with their bath and the cavity in vacuum, "vacuum" uses I/2
    for all modes, and an explicit symmetric 6x6 array is used as given.
    cavity_bath picks the cavity diffusion strength ("thermal" matches the
    magnon form, "vacuum" uses gammaC/2).
    """

    params: SystemParams
    t_final: float = 1.0e5
    dt: float = 1.0e-2
    decimation: int = 1000
    init_alpha1: complex = 0j
    init_alpha2: complex = 0j
    init_beta: complex = 0j
    init_cov: Union[str, np.ndarray] = "thermal"
    averaging_window_fraction: float = 0.2
    include_fluctuation_drive: bool = False
    cavity_bath: str = "thermal"

    def __post_init__(self):
        if not isinstance(self.params, SystemParams):
            raise ConfigInvalid("params must be a SystemParams")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigInvalid("dt must be > 0")
        if not (math.isfinite(self.t_final) and self.t_final > self.dt):
            raise ConfigInvalid("t_final must exceed dt")
        if int(self.decimation) != self.decimation or self.decimation < 1:
            raise ConfigInvalid("decimation must be an integer >= 1")
        object.__setattr__(self, "decimation", int(self.decimation))
        if not 0.0 < self.averaging_window_fraction <= 1.0:
            raise ConfigInvalid("averaging_window_fraction must be in (0, 1]")
        if self.cavity_bath not in ("thermal", "vacuum"):
            raise ConfigInvalid("cavity_bath must be 'thermal' or 'vacuum'")
        for name in ("init_alpha1", "init_alpha2", "init_beta"):
            z = complex(getattr(self, name))
            object.__setattr__(self, name, z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ConfigInvalid(f"{name} must be finite")
        if isinstance(self.init_cov, str):
            if self.init_cov not in ("thermal", "vacuum"):
                raise ConfigInvalid(
                    "init_cov must be 'thermal', 'vacuum', or a 6x6 array")
        else:
            c = np.asarray(self.init_cov, dtype=np.float64)
            if c.shape != (6, 6):
                raise ConfigInvalid("explicit init_cov must be 6x6")
            if not np.isfinite(c).all():
                raise ConfigInvalid("explicit init_cov must be finite")
            if not np.array_equal(c, c.T):
                raise ConfigInvalid("explicit init_cov must be symmetric")
            object.__setattr__(self, "init_cov", c)

    def initial_covariance(self) -> np.ndarray:
        if isinstance(self.init_cov, str):
            occ = self.params.nbar_m + 0.5
            if self.init_cov == "thermal":
                return np.diag([occ, occ, occ, occ, 0.5, 0.5])
            return 0.5 * np.eye(6)
        return np.array(self.init_cov, dtype=np.float64)

    def n_steps(self) -> int:
        n = int(round(self.t_final / self.dt))
        if n < 1:
            raise ConfigInvalid("t_final/dt must round to at least one step")
        return n


@dataclass
class TrajectoryRecord:
    """One decimated output sample of a propagation.

    phi is phi2 - phi1 wrapped to (-pi, pi]; when a mode still sits at the
    origin (undefined phase, e.g. the very first record) the phases are
    reported as 0 and the quantum measure falls back to its unrotated form.
    """

    t: float
    qbar1: float
    pbar1: float
    qbar2: float
    pbar2: float
    xbar: float
    ybar: float
    eps_c: float
    s_c: float
    phi1: float
    phi2: float
    phi: float
    s_q_phi: float
    cov: np.ndarray
    fluct_mean: Optional[np.ndarray] = None


def rk4_step(rhs, y, t: float, dt: float):
    """One classical fourth-order Runge-Kutta step of dy/dt = rhs(t, y).

    Works on scalars and arrays (real or complex). Raises StepDiverged if any
    output component is non-finite.
    """
    if dt <= 0.0:
        raise ConfigInvalid("dt must be > 0")
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1)
    k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2)
    k4 = rhs(t + dt, y + dt * k3)
    out = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    if not np.all(np.isfinite(out)):
        raise StepDiverged(f"non-finite state after step at t={t}")
    return out


def kernel_params(config: ScenarioConfig) -> np.ndarray:
    """Parameter vector for the compiled kernels, with diffusion strengths."""
    pv = np.empty(17, dtype=np.float64)
    pv[:14] = config.params.as_array()
    pv[14:] = diffusion_strengths(config.params, config.cavity_bath)
    return pv


def joint_rhs(config: ScenarioConfig, t: float, y: np.ndarray) -> np.ndarray:
    """Right-hand side of the stacked (mean field, covariance) system.

    Exposed for step-level tests; `propagate` runs the same kernel in a
    compiled loop.
    """
    pv = kernel_params(config)
    dy = np.empty_like(y)
    _kernels.rhs(t, y, pv, config.include_fluctuation_drive, dy)
    return dy


def initial_state_vector(config: ScenarioConfig) -> np.ndarray:
    n = _kernels.N_STATE + (6 if config.include_fluctuation_drive else 0)
    y0 = np.zeros(n, dtype=np.float64)
    y0[0] = config.init_alpha1.real
    y0[1] = config.init_alpha1.imag
    y0[2] = config.init_alpha2.real
    y0[3] = config.init_alpha2.imag
    y0[4] = config.init_beta.real
    y0[5] = config.init_beta.imag
    y0[6:27] = pack_covariance(config.initial_covariance())
    return y0


def _assemble_record(t: float, row: np.ndarray,
                     include_f: bool) -> TrajectoryRecord:
    rt2 = math.sqrt(2.0)
    q1, p1 = rt2 * row[0], rt2 * row[1]
    q2, p2 = rt2 * row[2], rt2 * row[3]
    xb, yb = rt2 * row[4], rt2 * row[5]
    eps_c, s_c = measures.classical_sync(q1, p1, q2, p2)
    try:
        phi1, phi2, phi = measures.limit_cycle_phase(q1, p1, q2, p2)
    except measures.PhaseUndefined:
        phi1 = phi2 = phi = 0.0
    cov = unpack_covariance(row[6:27])
    s_q_phi = measures.quantum_sync_phi(cov, phi)
    fluct = row[27:33].copy() if include_f else None
    return TrajectoryRecord(t=t, qbar1=q1, pbar1=p1, qbar2=q2, pbar2=p2,
                            xbar=xb, ybar=yb, eps_c=eps_c, s_c=s_c,
                            phi1=phi1, phi2=phi2, phi=phi, s_q_phi=s_q_phi,
                            cov=cov, fluct_mean=fluct)


def propagate(config: ScenarioConfig) -> list[TrajectoryRecord]:
    """Advance mean field and covariance jointly and return decimated records.

    Covariance symmetry is structural (only the upper triangle is integrated)
    and the drift matrix is rebuilt from the instantaneous mean field at every
    RK4 substage. Raises StepDiverged when the state leaves the finite range.
    """
    n_steps = config.n_steps()
    decim = config.decimation
    n_rec = 1 + n_steps // decim + (1 if n_steps % decim else 0)

    y0 = initial_state_vector(config)
    pv = kernel_params(config)
    rec_t = np.empty(n_rec, dtype=np.float64)
    rec_y = np.empty((n_rec, y0.size), dtype=np.float64)

    status, n_written, fail_step = _kernels.propagate_loop(
        y0, 0.0, config.dt, n_steps, decim, pv,
        config.include_fluctuation_drive, rec_t, rec_y)
    if status != 0:
        raise StepDiverged(
            f"state became non-finite near t={fail_step * config.dt:g} "
            f"(step {fail_step}); reduce dt or check parameters")

    include_f = config.include_fluctuation_drive
    return [_assemble_record(rec_t[m], rec_y[m], include_f)
            for m in range(n_written)]
