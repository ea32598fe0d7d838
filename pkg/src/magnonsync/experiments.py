"""Named scenario presets and parameter sweeps.

The presets encode the reference parameter set (all rates normalized to the
first drive amplitude): OmegaC = 1, Delta1 = Delta2 = 0.001, DeltaC = -0.2,
g1 = g2 = 0.1, K1 = K2 = 1e-10, gamma1 = gamma2 = gammaC = 0.1, with
Omega2 = 1.00001 for the shared-limit-cycle scenario and Omega2 = 1.1 for the
phase-locked ones. Sweeps run one propagation per grid point, optionally in a
process pool, and always return one summary row per point in grid order.
"""

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import measures
from .dynamics import (ConfigInvalid, ScenarioConfig, StepDiverged,
                       TrajectoryRecord, propagate)
from .model import SystemParams
from .output import write_trajectory

SCENARIOS = ("limit-cycle", "phase-locked", "sync-timeseries",
             "thermal-sweep", "custom")

#: Grid swept by the thermal-sweep preset when no explicit grid is given.
DEFAULT_THERMAL_GRID = (0.0, 0.5, 1.0, 2.0, 5.0)

#: Fraction of the run used for the tail RMS diagnostics (limit-cycle lock).
TAIL_RMS_FRACTION = 0.1

_PARAM_FIELDS = frozenset(f.name for f in fields(SystemParams))
_CONFIG_FIELDS = frozenset(f.name for f in fields(ScenarioConfig)) - {"params"}


def reference_params(Omega2: float = 1.1, nbar_m: float = 0.0) -> SystemParams:
    """The common parameter set of all presets."""
    return SystemParams(g1=0.1, g2=0.1, K1=1e-10, K2=1e-10,
                        Omega1=1.0, Omega2=Omega2, OmegaC=1.0,
                        Delta1=0.001, Delta2=0.001, DeltaC=-0.2,
                        gamma1=0.1, gamma2=0.1, gammaC=0.1, nbar_m=nbar_m)


def preset_config(scenario: str) -> ScenarioConfig:
    """Base ScenarioConfig for a named scenario."""
    if scenario not in SCENARIOS:
        raise ConfigInvalid(
            f"unknown scenario {scenario!r}; choose one of {', '.join(SCENARIOS)}")
    omega2 = 1.00001 if scenario == "limit-cycle" else 1.1
    return ScenarioConfig(params=reference_params(Omega2=omega2))


def apply_overrides(config: ScenarioConfig, overrides: dict) -> ScenarioConfig:
    """Return a config with parameter or scenario fields replaced by name."""
    param_over = {}
    config_over = {}
    for key, value in overrides.items():
        if key in _PARAM_FIELDS:
            param_over[key] = value
        elif key in _CONFIG_FIELDS:
            config_over[key] = value
        else:
            raise ConfigInvalid(f"unknown parameter path {key!r}")
    params = replace(config.params, **param_over) if param_over else config.params
    return replace(config, params=params, **config_over)


@dataclass(frozen=True)
class SweepSpec:
    """A scenario name plus override grids and the worker-pool width.

    overrides is a sequence of (field-name, value-grid) pairs; the sweep runs
    the cartesian product of all grids in the given order. The thermal-sweep
    scenario supplies its default nbar_m grid when none is given.
    """

    scenario: str = "custom"
    overrides: Sequence[tuple[str, Sequence]] = ()
    parallelism: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigInvalid(f"unknown scenario {self.scenario!r}")
        if int(self.parallelism) != self.parallelism or self.parallelism < 1:
            raise ConfigInvalid("parallelism must be an integer >= 1")
        object.__setattr__(self, "parallelism", int(self.parallelism))
        clean = []
        known = _PARAM_FIELDS | _CONFIG_FIELDS
        for key, grid in self.overrides:
            if key not in known:
                raise ConfigInvalid(f"unknown parameter path {key!r}")
            values = tuple(grid)
            if not values:
                raise ConfigInvalid(f"empty grid for {key!r}")
            clean.append((key, values))
        if (self.scenario == "thermal-sweep"
                and not any(k == "nbar_m" for k, _ in clean)):
            clean.insert(0, ("nbar_m", DEFAULT_THERMAL_GRID))
        object.__setattr__(self, "overrides", tuple(clean))

    def grid_points(self) -> list[dict]:
        if not self.overrides:
            return [{}]
        keys = [k for k, _ in self.overrides]
        grids = [g for _, g in self.overrides]
        return [dict(zip(keys, combo)) for combo in itertools.product(*grids)]


@dataclass
class PointSummary:
    """Tail diagnostics of one sweep point.

    phi_tail is the median phase difference over the averaging window;
    epsc_tail_rms and radius_tail_rms are RMS values over the final
    TAIL_RMS_FRACTION of the run; sbar_qphi is the windowed time average of
    the quantum measure; max_kerr_secular is the largest |2*K_i*t|*|alpha_i|^2
    seen at a record, the validity diagnostic of the secular Kerr expansion.
    """

    index: int
    overrides: dict
    status: str
    phi_tail: float
    epsc_tail_rms: float
    radius_tail_rms: float
    sbar_qphi: float
    max_kerr_secular: float
    runtime_s: float
    error: str = ""
    traj_path: Optional[str] = None


@dataclass
class SweepResult:
    """Grid-ordered summaries of a sweep, plus optional full trajectories."""

    scenario: str
    points: list[PointSummary]
    records: Optional[list[Optional[list[TrajectoryRecord]]]] = None


def summarize_records(records: list[TrajectoryRecord],
                      config: ScenarioConfig) -> dict:
    """Tail statistics of a finished propagation."""
    t = np.array([r.t for r in records])
    span = t[-1] - t[0]
    window = t >= t[-1] - config.averaging_window_fraction * span
    tail = t >= t[-1] - TAIL_RMS_FRACTION * span

    phi = np.array([r.phi for r in records])
    sq = np.array([r.s_q_phi for r in records])
    q1 = np.array([r.qbar1 for r in records])
    p1 = np.array([r.pbar1 for r in records])
    q2 = np.array([r.qbar2 for r in records])
    p2 = np.array([r.pbar2 for r in records])

    occ1 = 0.5 * (q1 ** 2 + p1 ** 2)
    occ2 = 0.5 * (q2 ** 2 + p2 ** 2)
    sec = np.maximum(2.0 * abs(config.params.K1) * t * occ1,
                     2.0 * abs(config.params.K2) * t * occ2)

    return {
        "phi_tail": float(np.median(phi[window])),
        "epsc_tail_rms": float(np.sqrt(np.mean(
            (q1[tail] - q2[tail]) ** 2 + (p1[tail] - p2[tail]) ** 2))),
        "radius_tail_rms": float(np.sqrt(np.mean(q1[tail] ** 2 + p1[tail] ** 2))),
        "sbar_qphi": measures.time_average(
            t, sq, config.averaging_window_fraction),
        "max_kerr_secular": float(sec.max()),
    }


def _run_point(args):
    """Worker body: one grid point in, one summary (and maybe records) out."""
    index, scenario, base_config, overrides, out_path, full_cov, keep = args
    start = time.perf_counter()
    try:
        config = apply_overrides(base_config, overrides)
        records = propagate(config)
    except StepDiverged as exc:
        return PointSummary(
            index=index, overrides=overrides, status="diverged",
            phi_tail=float("nan"), epsc_tail_rms=float("nan"),
            radius_tail_rms=float("nan"), sbar_qphi=float("nan"),
            max_kerr_secular=float("nan"),
            runtime_s=time.perf_counter() - start, error=str(exc)), None
    stats = summarize_records(records, config)
    if out_path is not None:
        write_trajectory(records, out_path, full_covariance=full_cov)
    summary = PointSummary(
        index=index, overrides=overrides, status="ok",
        runtime_s=time.perf_counter() - start,
        traj_path=str(out_path) if out_path is not None else None,
        **stats)
    return summary, records if keep else None


def run_scenario(spec: SweepSpec, base_config: Optional[ScenarioConfig] = None,
                 out_dir=None, full_covariance: bool = False,
                 keep_records: bool = False) -> SweepResult:
    """Run every grid point of a sweep and collect summaries in grid order.

    base_config defaults to the scenario preset. With out_dir set, each point
    writes its trajectory to point_NNN.csv inside that directory. Points that
    diverge are reported as rows with status "diverged" rather than aborting
    the sweep; configuration errors, in contrast, abort immediately.
    """
    if base_config is None:
        base_config = preset_config(spec.scenario)
    points = spec.grid_points()

    jobs = []
    for i, overrides in enumerate(points):
        apply_overrides(base_config, overrides)  # validate before launching
        out_path = None
        if out_dir is not None:
            out_path = str(Path(out_dir) / f"point_{i:03d}.csv")
        jobs.append((i, spec.scenario, base_config, overrides, out_path,
                     full_covariance, keep_records))

    if spec.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            outcomes = list(pool.map(_run_point, jobs))
    else:
        outcomes = [_run_point(job) for job in jobs]

    summaries = [s for s, _ in outcomes]
    records = [r for _, r in outcomes] if keep_records else None
    return SweepResult(scenario=spec.scenario, points=summaries,
                       records=records)
