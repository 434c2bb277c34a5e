"""Smoke tests for the Python bindings and the CLI surface."""

import json
import math
import os
import subprocess

import pytest

import gfdet


def test_version_and_rng_tag():
    assert gfdet.__version__
    assert "splitmix64" in gfdet.RNG_VERSION


def test_pilot_generation_and_assignment():
    seq = gfdet.generate_zc(gfdet.PilotSpec(7, 1, 0))
    assert len(seq) == 7
    assert all(abs(abs(z) - 1.0) < 1e-12 for z in seq)
    corr = gfdet.cross_correlation(seq, seq)
    assert abs(corr - 7.0) < 1e-9

    assignment = gfdet.assign_pilots(5, 3)
    assert [p.root_r for p in assignment.pilots] == [1, 2, 1, 2, 1]
    assert [p.shift_s for p in assignment.pilots] == [0, 0, 1, 1, 2]
    assert assignment.root_group_sizes == {1: 3, 2: 2}

    with pytest.raises(ValueError):
        gfdet.generate_zc(gfdet.PilotSpec(8, 1, 0))  # non-prime length


def test_scalar_kernels():
    assert gfdet.q_function(0.0) == pytest.approx(0.5)
    assert gfdet.q_function(gfdet.q_inverse(0.01)) == pytest.approx(0.01, rel=1e-10)
    assert gfdet.binomial_pmf(2, 0.5, 1) == pytest.approx(0.5)
    assert gfdet.binomial_tail(5, 1.0, 5) == 1.0
    assert gfdet.chi_square_cdf(2, 2.0 * math.log(2.0)) == pytest.approx(0.5)


def test_scheduling_rules():
    assert gfdet.max_scheduling_size(2, 1.0, 0.5) == 1
    assert gfdet.min_pilot_length(42) == 7
    assert gfdet.min_pilot_length(4846) == 71


def test_threshold_and_trials_roundtrip():
    config = gfdet.SystemConfig(
        antennas_M=32,
        pilot_length_L=11,
        user_count_K=40,
        arrival_rate_PA=0.2,
        target_detection_PD=0.95,
        outage_PO=0.1,
        tail_model=gfdet.TailModel.exact_chi_square,
    )
    solved = gfdet.solve_threshold(config)
    assert solved.omega > 0.0
    assert solved.achieved_miss <= 0.05 + 1e-9

    model = gfdet.build_statistic_model(config, config.default_probe_group_size())
    assert gfdet.miss_probability(solved.omega, model) == pytest.approx(0.05, abs=1e-9)

    plan = gfdet.TrialPlan(config, gfdet.TrialMode.model_faithful, 20000, seed=9)
    one = gfdet.run_trials(plan, solved.omega, 1)
    two = gfdet.run_trials(plan, solved.omega, 2)
    assert one.pd_detections == two.pd_detections
    assert one.pfa_detections == two.pfa_detections
    assert one.wilson_ci_pd.low <= one.empirical_pd <= one.wilson_ci_pd.high


def test_sweep_csv():
    spec = gfdet.sweep_spec_from_json_text(
        json.dumps(
            {
                "axis": "antennas_M",
                "grid": [16, 32],
                "pd_targets": [0.9],
                "fixed": {
                    "antennas_M": 16,
                    "pilot_length_L": 11,
                    "user_count_K": 30,
                    "arrival_rate_PA": 0.2,
                    "target_detection_PD": 0.9,
                    "outage_PO": 0.1,
                },
            }
        )
    )
    csv_text = gfdet.run_sweep_csv(spec)
    lines = csv_text.strip().split("\n")
    assert len(lines) == 3
    header = lines[0].split(",")
    for column in ("M", "L", "K", "P_A", "P_D", "P_O", "kmax", "omega", "pfa_analytic"):
        assert column in header
    assert csv_text == gfdet.run_sweep_csv(spec)  # byte-stable


CLI = os.environ.get("GFDET_CLI")


@pytest.mark.skipif(not CLI, reason="GFDET_CLI not set")
def test_cli_exit_codes(tmp_path):
    out = subprocess.run(
        [CLI, "kmax", "--antennas", "512", "--arrival", "0.1", "--po", "0.1"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout.strip().endswith("4846,ok")

    sweep_file = tmp_path / "sweep.json"
    sweep_file.write_text(
        json.dumps(
            {
                "axis": "arrival_rate_PA",
                "grid": [0.1, 0.2],
                "pd_targets": [0.9],
                "fixed": {
                    "antennas_M": 16,
                    "pilot_length_L": 11,
                    "user_count_K": 30,
                    "arrival_rate_PA": 0.1,
                    "target_detection_PD": 0.9,
                    "outage_PO": 0.1,
                },
            }
        )
    )
    out_csv = tmp_path / "rows.csv"
    ok = subprocess.run(
        [CLI, "sweep", "--config", str(sweep_file), "--out", str(out_csv)],
        capture_output=True,
        text=True,
    )
    assert ok.returncode == 0
    assert out_csv.read_text().startswith("axis,M,L,K,")

    bad_file = tmp_path / "bad.json"
    bad_file.write_text('{"axis":"arrival_rate_PA","grid":[0.1],"unknown_key":1,"fixed":{}}')
    bad = subprocess.run(
        [CLI, "sweep", "--config", str(bad_file), "--out", str(out_csv)],
        capture_output=True,
        text=True,
    )
    assert bad.returncode == 2
    assert "unknown_key" in bad.stderr

    io_fail = subprocess.run(
        [CLI, "sweep", "--config", str(sweep_file), "--out", "/no_such_dir/x.csv"],
        capture_output=True,
        text=True,
    )
    assert io_fail.returncode == 3
