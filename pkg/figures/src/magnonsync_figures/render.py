"""Figure rendering from trajectory and summary CSV files.

Output is deterministic: fixed figure geometry and DPI, the Agg backend, and
no timestamp metadata in the PNG, so identical inputs produce identical bytes.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (5.0, 4.0)
DPI = 150
MODE_COLORS = ("#c23b22", "#1f77b4")  # magnon 1 red, magnon 2 blue

KINDS = ("phase-portrait", "timeseries", "sweep-curve")


class MissingColumn(KeyError):
    def __init__(self, path, name):
        super().__init__(f"{path}: no column {name!r}")


def load_columns(path) -> dict[str, np.ndarray]:
    """Read a delimited file with a header row into named float arrays.

    Non-numeric cells (e.g. status strings in sweep summaries) come back as
    NaN; empty files with just a header give zero-length columns.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(path)
    with open(path, "r", encoding="ascii") as fh:
        names = fh.readline().strip().split(",")
        data = [[] for _ in names]
        for line in fh:
            for store, cell in zip(data, line.rstrip("\n").split(",")):
                try:
                    store.append(float(cell))
                except ValueError:
                    store.append(float("nan"))
    return {name: np.asarray(vals, dtype=np.float64)
            for name, vals in zip(names, data)}


def _require(cols: dict, path, names: Sequence[str]) -> None:
    for name in names:
        if name not in cols:
            raise MissingColumn(path, name)


@dataclass
class FigureSpec:
    """What to draw and where to put it.

    kind: "phase-portrait" overlays the two magnon orbits; "timeseries" plots
    the given y columns against t; "sweep-curve" plots one summary column
    against a swept parameter column. xlim/ylim of None autoscale.
    """

    kind: str
    csv_path: Path
    out_path: Path
    y_columns: Sequence[str] = ("qbar1", "qbar2")
    x_column: str = "t"
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None
    title: str = ""
    xlim: Optional[tuple] = None
    ylim: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")


def _new_axes():
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    return fig, ax


def _save(fig, out_path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, metadata={"Software": None})
    plt.close(fig)
    return out_path


def render(spec: FigureSpec) -> Path:
    """Render one figure from a CSV per the spec; returns the image path."""
    cols = load_columns(spec.csv_path)
    fig, ax = _new_axes()
    if spec.kind == "phase-portrait":
        _require(cols, spec.csv_path, ("qbar1", "pbar1", "qbar2", "pbar2"))
        ax.plot(cols["qbar1"], cols["pbar1"], color=MODE_COLORS[0],
                lw=0.7, label="mode 1")
        ax.plot(cols["qbar2"], cols["pbar2"], color=MODE_COLORS[1],
                lw=0.7, ls="--", label="mode 2")
        ax.set_xlabel(spec.xlabel or "q")
        ax.set_ylabel(spec.ylabel or "p")
        ax.set_aspect("equal", adjustable="datalim")
        if len(cols["qbar1"]):
            ax.legend(loc="upper right", fontsize=8)
    elif spec.kind == "timeseries":
        _require(cols, spec.csv_path, (spec.x_column, *spec.y_columns))
        for name, color in zip(spec.y_columns, MODE_COLORS * 4):
            ax.plot(cols[spec.x_column], cols[name], color=color, lw=0.8,
                    label=name)
        ax.set_xlabel(spec.xlabel or spec.x_column)
        ax.set_ylabel(spec.ylabel or ", ".join(spec.y_columns))
        if len(cols[spec.x_column]) and len(spec.y_columns) > 1:
            ax.legend(loc="upper right", fontsize=8)
    else:  # sweep-curve
        _require(cols, spec.csv_path, (spec.x_column, *spec.y_columns))
        for name in spec.y_columns:
            ax.plot(cols[spec.x_column], cols[name], "o-", color=MODE_COLORS[1],
                    lw=1.0, ms=4)
        ax.set_xlabel(spec.xlabel or spec.x_column)
        ax.set_ylabel(spec.ylabel or ", ".join(spec.y_columns))
    if spec.title:
        ax.set_title(spec.title)
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    return _save(fig, spec.out_path)


def render_run(run_dir, out_dir=None) -> list[Path]:
    """Render the standard figure set for a run directory.

    The manifest lists the trajectory files; each gets a phase portrait, the
    two quadrature time series, and the synchronization time series. If the
    run swept a parameter, the sweep curve is rendered from summary.csv
    against the first swept key.
    """
    run_dir = Path(run_dir)
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.is_file():
        raise FileNotFoundError(manifest_path)
    manifest = json.loads(manifest_path.read_text())
    out_dir = Path(out_dir) if out_dir is not None else run_dir / "figures"

    written = []
    for name in manifest.get("artifacts", {}).get("trajectories", []):
        stem = Path(name).stem
        csv_path = run_dir / name
        written.append(render(FigureSpec(
            kind="phase-portrait", csv_path=csv_path,
            out_path=out_dir / f"{stem}_phase_portrait.png")))
        written.append(render(FigureSpec(
            kind="timeseries", csv_path=csv_path,
            y_columns=("qbar1", "qbar2"),
            out_path=out_dir / f"{stem}_q_timeseries.png")))
        written.append(render(FigureSpec(
            kind="timeseries", csv_path=csv_path,
            y_columns=("pbar1", "pbar2"),
            out_path=out_dir / f"{stem}_p_timeseries.png")))
        written.append(render(FigureSpec(
            kind="timeseries", csv_path=csv_path, y_columns=("sQphi",),
            ylabel="S_q^phi",
            out_path=out_dir / f"{stem}_sync_timeseries.png")))

    grid = manifest.get("resolved_config", {}).get("grid", {})
    summary_name = manifest.get("artifacts", {}).get("summary")
    if grid and summary_name:
        swept = sorted(grid)[0]
        written.append(render(FigureSpec(
            kind="sweep-curve", csv_path=run_dir / summary_name,
            x_column=swept, y_columns=("sbar_qphi",),
            ylabel="time-averaged S_q^phi",
            out_path=out_dir / "sweep_curve.png")))
    return written
