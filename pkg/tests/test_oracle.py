import io
import math

import numpy as np
import pytest

from gainswitch.dynamics import DEFAULT_DT_PULSE, DriveWaveform, integrate
from gainswitch.metrics import extract_metrics
from gainswitch.oracle import (ORACLE_CSV_HEADER, TruncationError,
                               euler_reference_trajectory,
                               poisson_gain_oracle, run_verification_suite,
                               write_oracle_csv)
from gainswitch.thermal import thermal_state

EULER_DT = DEFAULT_DT_PULSE / 50.0


def test_poisson_oracle_trivials():
    assert poisson_gain_oracle(0.0, 0.5, 1.7e-6) == pytest.approx(
        1.7e-6, rel=1e-12)
    assert poisson_gain_oracle(0.48, 1.0, 0.0) == pytest.approx(
        1.0 - math.exp(-0.48), rel=1e-12)


def test_poisson_oracle_validation():
    with pytest.raises(ValueError):
        poisson_gain_oracle(0.48, 0.5, 0.0, n_max=19)
    with pytest.raises(ValueError):
        poisson_gain_oracle(-0.1, 0.5, 0.0)


def test_poisson_truncation_guard():
    with pytest.raises(TruncationError):
        poisson_gain_oracle(5.0, 0.5, 0.0, n_max=20)
    with pytest.raises(TruncationError):
        poisson_gain_oracle(30.0, 0.5, 0.0, n_max=20)


def test_poisson_oracle_truncation_independent():
    short = poisson_gain_oracle(0.48, 0.5, 1.7e-6, n_max=60)
    long = poisson_gain_oracle(0.48, 0.5, 1.7e-6, n_max=120)
    assert short == pytest.approx(long, rel=1e-15)


def test_euler_validation(profile, constants):
    thermal = thermal_state(constants, 25.0, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                          pulse_duration=profile.pulse_duration)
    with pytest.raises(ValueError):
        euler_reference_trajectory(thermal, constants, drive, 0.0, 1e-10)
    with pytest.raises(ValueError):
        euler_reference_trajectory(thermal, constants, drive, 1e-15, 1e-10)
    with pytest.raises(ValueError):
        euler_reference_trajectory(thermal, constants, drive, EULER_DT,
                                   1e-10, store_every=7)
    with pytest.raises(ValueError):
        euler_reference_trajectory(thermal, constants, drive, EULER_DT,
                                   1e-17)


def test_euler_zero_drive_fixed_point(profile, constants):
    thermal = thermal_state(constants, 25.0, profile.j_dc)
    # zero current everywhere: no DC bias, AC pulse deferred past the horizon
    drive = DriveWaveform(j_dc=0.0, j_ac=profile.j_ac_signal,
                          pulse_duration=profile.pulse_duration,
                          start_offset=1.0)
    traj = euler_reference_trajectory(thermal, constants, drive, EULER_DT,
                                      5e-9, initial=(0.0, 0.0),
                                      store_every=10000)
    assert np.abs(traj.n).max() <= 1e-6
    assert np.abs(traj.s).max() <= 1e-6


def test_euler_matches_main_integrator_25c(profile, constants):
    thermal = thermal_state(constants, 25.0, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                          pulse_duration=profile.pulse_duration)
    horizon = 0.5e-9
    main = extract_metrics(integrate(thermal, constants, drive,
                                     DEFAULT_DT_PULSE, horizon))
    fine = extract_metrics(euler_reference_trajectory(
        thermal, constants, drive, EULER_DT, horizon, store_every=50))
    assert abs(main.s_max - fine.s_max) / fine.s_max < 5e-3
    assert abs(main.t_peak - fine.t_peak) < 1e-12


def test_euler_matches_main_integrator_45c_decoy(profile, constants):
    thermal = thermal_state(constants, 45.0, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_decoy,
                          pulse_duration=profile.pulse_duration)
    horizon = 0.5e-9
    main = extract_metrics(integrate(thermal, constants, drive,
                                     DEFAULT_DT_PULSE, horizon))
    fine = extract_metrics(euler_reference_trajectory(
        thermal, constants, drive, EULER_DT, horizon, store_every=50))
    assert abs(main.t_peak - fine.t_peak) < 1e-12


def test_quick_suite_passes(profile):
    reports = run_verification_suite(profile, quick=True)
    assert len(reports) == 6
    for r in reports:
        assert r.passed == (r.deviation <= r.tolerance)
        assert r.passed, f"{r.quantity}: deviation {r.deviation:.3e}"
    names = {r.quantity for r in reports}
    assert "count_rate_signal_vs_poisson_sum" in names
    assert "signal_balance_residual" in names


def test_oracle_csv(profile):
    reports = run_verification_suite(profile, quick=True)
    buf = io.StringIO()
    write_oracle_csv(reports, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ORACLE_CSV_HEADER
    assert len(lines) == len(reports) + 1
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 6
        assert fields[5] == "true"
        assert float(fields[3]) <= float(fields[4])
