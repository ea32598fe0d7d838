"""Trajectory, summary, and manifest serialization.

Trajectories go to CSV with a fixed header; floats are written with 17
significant digits so a re-parse reproduces every double exactly. By default
only the eight covariance entries entering the quantum measure are stored;
full_covariance adds the remaining thirteen upper-triangle entries.
"""

import json
from pathlib import Path

import numpy as np

from .dynamics import TrajectoryRecord

#: Fixed trajectory header (covariance entries use 1-based indices).
BASE_COLUMNS = ("t", "qbar1", "pbar1", "qbar2", "pbar2", "xbar", "ybar",
                "epsC", "phi", "sQphi",
                "C11", "C22", "C33", "C44", "C13", "C24", "C23", "C14")

#: Extra columns appended by full_covariance (rest of the upper triangle).
FULL_COLUMNS = ("C12", "C15", "C16", "C25", "C26", "C34", "C35", "C36",
                "C45", "C46", "C55", "C56", "C66")

#: Deterministic sweep summary header (per-point wall time stays out of it,
#: and lives in the manifest instead).
SUMMARY_COLUMNS = ("point", "status", "phi_tail", "epsc_tail_rms",
                   "radius_tail_rms", "sbar_qphi", "max_kerr_secular",
                   "traj_file")

MANIFEST_NAME = "manifest.json"


class IoError(RuntimeError):
    """File I/O failure, carrying the offending path."""

    def __init__(self, path, cause):
        super().__init__(f"{path}: {cause}")
        self.path = str(path)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _cov_indices(columns) -> list[tuple[int, int]]:
    return [(int(name[1]) - 1, int(name[2]) - 1) for name in columns]


_BASE_COV = _cov_indices(BASE_COLUMNS[10:])
_FULL_COV = _cov_indices(FULL_COLUMNS)


def write_trajectory(records: list[TrajectoryRecord], path,
                     full_covariance: bool = False) -> None:
    """Write decimated records as CSV, one row per record, in time order."""
    columns = BASE_COLUMNS + (FULL_COLUMNS if full_covariance else ())
    cov_idx = _BASE_COV + (_FULL_COV if full_covariance else [])
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(",".join(columns) + "\n")
            for r in records:
                row = [r.t, r.qbar1, r.pbar1, r.qbar2, r.pbar2, r.xbar,
                       r.ybar, r.eps_c, r.phi, r.s_q_phi]
                row.extend(r.cov[i, j] for i, j in cov_idx)
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise IoError(path, exc) from exc


def read_trajectory(path) -> dict[str, np.ndarray]:
    """Parse a trajectory CSV into named column arrays (exact doubles)."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().strip()
            if not header:
                raise IoError(path, "empty file, expected a CSV header")
            names = header.split(",")
            if tuple(names[:len(BASE_COLUMNS)]) != BASE_COLUMNS:
                raise IoError(path, "unrecognized trajectory header")
            data = [[] for _ in names]
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) != len(names):
                    raise IoError(path, f"row with {len(parts)} fields, "
                                        f"expected {len(names)}")
                for store, text in zip(data, parts):
                    store.append(float(text))
    except OSError as exc:
        raise IoError(path, exc) from exc
    return {name: np.array(vals, dtype=np.float64)
            for name, vals in zip(names, data)}


def write_summary(points, path) -> None:
    """Write one deterministic summary row per sweep point."""
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            keys = sorted({k for p in points for k in p.overrides})
            header = (SUMMARY_COLUMNS[:2] + tuple(keys)
                      + SUMMARY_COLUMNS[2:])
            fh.write(",".join(header) + "\n")
            for p in points:
                row = [str(p.index), p.status]
                row.extend(_fmt(float(p.overrides[k])) if k in p.overrides
                           else "" for k in keys)
                row.extend(_fmt(v) for v in (p.phi_tail, p.epsc_tail_rms,
                                             p.radius_tail_rms, p.sbar_qphi,
                                             p.max_kerr_secular))
                row.append(Path(p.traj_path).name if p.traj_path else "")
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise IoError(path, exc) from exc


def read_summary(path) -> list[dict]:
    """Parse a sweep summary CSV into a list of per-point dicts."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            names = fh.readline().strip().split(",")
            rows = []
            for line in fh:
                parts = line.rstrip("\n").split(",")
                row = {}
                for name, text in zip(names, parts):
                    if name in ("point",):
                        row[name] = int(text)
                    elif name in ("status", "traj_file"):
                        row[name] = text
                    else:
                        row[name] = float(text) if text else None
                rows.append(row)
    except OSError as exc:
        raise IoError(path, exc) from exc
    return rows


def write_manifest(out_dir, manifest: dict) -> Path:
    """Write the single run manifest of an output directory."""
    path = Path(out_dir) / MANIFEST_NAME
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(path, exc) from exc
    return path


def read_manifest(run_dir) -> dict:
    path = Path(run_dir) / MANIFEST_NAME
    try:
        with open(path, "r", encoding="ascii") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(path, exc) from exc
