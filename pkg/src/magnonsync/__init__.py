"""Deterministic simulator for two cavity-coupled Kerr magnon modes.

Propagates the nonlinear mean field and the Gaussian fluctuation covariance of
two driven magnon modes sharing a microwave cavity, and evaluates classical
and quantum phase-synchronization measures along the trajectory.
"""

__version__ = "0.1.0"

from .dynamics import (ConfigInvalid, ScenarioConfig, StepDiverged,
                       TrajectoryRecord, propagate, rk4_step)
from .experiments import (SweepSpec, SweepResult, PointSummary,
                          preset_config, reference_params, run_scenario)
from .measures import (classical_sync, limit_cycle_phase, quantum_sync_phi,
                       time_average)
from .model import (CoefficientSet, FramePhases, MeanFieldState, SystemParams,
                    frame_phases, kerr_secular_factor, langevin_drift,
                    linearization_coefficients, mean_field_drift)
from .quadrature import (coupling_block, diffusion_matrix,
                         diffusion_strengths, drift_matrix, mean_quadratures)

__all__ = [
    "__version__",
    "SystemParams", "MeanFieldState", "FramePhases", "CoefficientSet",
    "kerr_secular_factor", "frame_phases", "mean_field_drift",
    "langevin_drift", "linearization_coefficients",
    "coupling_block", "drift_matrix", "diffusion_matrix",
    "diffusion_strengths", "mean_quadratures",
    "ScenarioConfig", "TrajectoryRecord", "StepDiverged", "ConfigInvalid",
    "rk4_step", "propagate",
    "classical_sync", "limit_cycle_phase", "quantum_sync_phi", "time_average",
    "SweepSpec", "SweepResult", "PointSummary", "preset_config",
    "reference_params", "run_scenario",
]
