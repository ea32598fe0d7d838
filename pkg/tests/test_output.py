"""Serialization: trajectory CSV, sweep summaries, run manifests."""

import math

import numpy as np
import pytest

from magnonsync.dynamics import ScenarioConfig, TrajectoryRecord, propagate
from magnonsync.output import (BASE_COLUMNS, FULL_COLUMNS, IoError,
                               read_manifest, read_summary, read_trajectory,
                               write_manifest, write_summary, write_trajectory)

EXPECTED_HEADER = ("t,qbar1,pbar1,qbar2,pbar2,xbar,ybar,"
                   "epsC,phi,sQphi,C11,C22,C33,C44,C13,C24,C23,C14")


def zero_record():
    return TrajectoryRecord(t=0.0, qbar1=0.0, pbar1=0.0, qbar2=0.0, pbar2=0.0,
                            xbar=0.0, ybar=0.0, eps_c=0.0, s_c=math.inf,
                            phi1=0.0, phi2=0.0, phi=0.0, s_q_phi=0.0,
                            cov=np.zeros((6, 6)))


@pytest.fixture(scope="module")
def short_records(fig_params):
    config = ScenarioConfig(params=fig_params, t_final=5.0, dt=1e-2,
                            decimation=50)
    return propagate(config)


class TestTrajectoryCsv:
    def test_header_contract(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_trajectory([], path)
        assert path.read_text() == EXPECTED_HEADER + "\n"

    def test_single_zero_record(self, tmp_path):
        path = tmp_path / "zero.csv"
        write_trajectory([zero_record()], path)
        lines = path.read_text().splitlines()
        assert lines[0] == EXPECTED_HEADER
        assert lines[1] == ",".join(["0"] * 18)

    def test_round_trip_is_exact(self, tmp_path, short_records):
        path = tmp_path / "run.csv"
        write_trajectory(short_records, path)
        cols = read_trajectory(path)
        assert tuple(cols) == BASE_COLUMNS
        r = short_records
        assert np.array_equal(cols["t"], [x.t for x in r])
        assert np.array_equal(cols["qbar1"], [x.qbar1 for x in r])
        assert np.array_equal(cols["sQphi"], [x.s_q_phi for x in r])
        assert np.array_equal(cols["epsC"], [x.eps_c for x in r])
        assert np.array_equal(cols["C23"], [x.cov[1, 2] for x in r])
        assert np.array_equal(cols["C14"], [x.cov[0, 3] for x in r])

    def test_full_covariance_round_trip(self, tmp_path, short_records):
        path = tmp_path / "full.csv"
        write_trajectory(short_records, path, full_covariance=True)
        cols = read_trajectory(path)
        assert tuple(cols) == BASE_COLUMNS + FULL_COLUMNS
        # every upper-triangle entry reconstructs exactly
        for name in BASE_COLUMNS[10:] + FULL_COLUMNS:
            i, j = int(name[1]) - 1, int(name[2]) - 1
            assert np.array_equal(cols[name],
                                  [x.cov[i, j] for x in short_records]), name

    def test_awkward_floats_survive(self, tmp_path):
        rec = zero_record()
        rec.t = 0.1
        rec.qbar1 = 1e-17
        rec.pbar1 = -0.0
        rec.s_q_phi = 1.0 + 2 ** -52
        path = tmp_path / "awkward.csv"
        write_trajectory([rec], path)
        cols = read_trajectory(path)
        assert cols["t"][0] == 0.1
        assert cols["qbar1"][0] == 1e-17
        assert cols["sQphi"][0] == 1.0 + 2 ** -52

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError, match="nope.csv"):
            read_trajectory(tmp_path / "nope.csv")

    def test_foreign_header_rejected(self, tmp_path):
        path = tmp_path / "foreign.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(IoError):
            read_trajectory(path)


class TestSummaryCsv:
    def test_round_trip(self, tmp_path, fig_params):
        from magnonsync.experiments import PointSummary
        points = [
            PointSummary(index=0, overrides={"nbar_m": 0.0}, status="ok",
                         phi_tail=0.132, epsc_tail_rms=1e-4,
                         radius_tail_rms=17.0, sbar_qphi=0.9999,
                         max_kerr_secular=2e-3, runtime_s=1.0,
                         traj_path="/x/point_000.csv"),
            PointSummary(index=1, overrides={"nbar_m": 1.0},
                         status="diverged", phi_tail=math.nan,
                         epsc_tail_rms=math.nan, radius_tail_rms=math.nan,
                         sbar_qphi=math.nan, max_kerr_secular=math.nan,
                         runtime_s=1.0, error="boom"),
        ]
        path = tmp_path / "summary.csv"
        write_summary(points, path)
        rows = read_summary(path)
        assert rows[0]["point"] == 0
        assert rows[0]["nbar_m"] == 0.0
        assert rows[0]["sbar_qphi"] == 0.9999
        assert rows[0]["traj_file"] == "point_000.csv"
        assert rows[1]["status"] == "diverged"
        assert math.isnan(rows[1]["phi_tail"])
        # per-point wall time never enters the summary (determinism contract)
        text = path.read_text()
        assert "runtime" not in text.splitlines()[0]


class TestManifest:
    def test_round_trip(self, tmp_path):
        manifest = {"version": "0.1.0", "resolved_config": {"dt": 0.01},
                    "artifacts": {"summary": "summary.csv"}}
        write_manifest(tmp_path, manifest)
        assert read_manifest(tmp_path) == manifest

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(IoError):
            read_manifest(tmp_path)
