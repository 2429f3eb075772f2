import io

import numpy as np
import pytest

from gainswitch.dynamics import (CLAMP_LIMIT, DEFAULT_DT_PULSE,
                                 DEFAULT_DT_TRAIN, DivergenceError,
                                 DriveWaveform, NoSteadyStateError,
                                 derivatives, integrate, simulate_train,
                                 steady_state_s, write_trajectory_csv)
from gainswitch.metrics import extract_metrics
from gainswitch.thermal import thermal_state


@pytest.fixture(scope="module")
def thermal25(profile):
    return thermal_state(profile.constants, 25.0, profile.j_dc)


def single_pulse_drive(profile, start_offset=0.0):
    return DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                         pulse_duration=profile.pulse_duration,
                         start_offset=start_offset)


def test_defaults():
    assert DEFAULT_DT_PULSE == 10e-15
    assert DEFAULT_DT_TRAIN == 20e-15
    assert CLAMP_LIMIT == 1e-6


def test_drive_validation():
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=1.0, j_ac=1.0, pulse_duration=0.0)
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=1.0, j_ac=0.0, pulse_duration=1e-10)
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=-1.0, j_ac=1.0, pulse_duration=1e-10)
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=1.0, j_ac=1.0, pulse_duration=1e-10, n_pulses=0)
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=1.0, j_ac=1.0, pulse_duration=1e-10, n_pulses=2)
    with pytest.raises(ValueError):
        DriveWaveform(j_dc=1.0, j_ac=1.0, pulse_duration=1e-10,
                      period=1e-10, n_pulses=2)


def test_drive_current_single_pulse():
    d = DriveWaveform(j_dc=2.0, j_ac=5.0, pulse_duration=1e-10,
                      start_offset=1e-10)
    assert d.current(0.0) == 2.0
    assert d.current(1.5e-10) == 7.0
    assert d.current(2.5e-10) == 2.0
    assert d.edge_times() == [1e-10]


def test_drive_current_train():
    d = DriveWaveform(j_dc=2.0, j_ac=5.0, pulse_duration=1e-10,
                      period=4e-10, n_pulses=2)
    assert d.current(0.5e-10) == 7.0
    assert d.current(2e-10) == 2.0
    assert d.current(4.5e-10) == 7.0
    assert d.current(8.5e-10) == 2.0  # past the last pulse
    assert d.edge_times() == [0.0, 4e-10]


def test_derivatives_dc_fixed_point(profile, thermal25):
    c = profile.constants
    dn_dt, ds_dt = derivatives((thermal25.n_dc, 0.0), profile.j_dc,
                               thermal25, c)
    assert dn_dt == 0.0
    expected = c.gamma * c.beta_sp * thermal25.n_dc / thermal25.tau_n
    assert ds_dt == pytest.approx(expected, rel=1e-12)
    assert ds_dt > 0.0


def test_derivatives_transparency(profile, thermal25):
    dn_dt, _ = derivatives((thermal25.n0, 7e22), 0.0, thermal25,
                           profile.constants)
    assert dn_dt == pytest.approx(-thermal25.n0 / thermal25.tau_n, rel=1e-12)


def test_derivatives_threshold_gain_cancels_loss(profile, thermal25):
    c = profile.constants
    for s in (1e20, 5e22):
        _, ds_dt = derivatives((thermal25.n_th, s), 0.0, thermal25, c)
        expected = c.gamma * c.beta_sp * thermal25.n_th / thermal25.tau_n
        assert ds_dt == pytest.approx(expected, rel=1e-9)


def test_steady_state_trivials(profile, thermal25):
    c = profile.constants
    assert steady_state_s(thermal25, c, 0.0) == 0.0
    expected = c.gamma * c.beta_sp * thermal25.n0 * c.tau_p / thermal25.tau_n
    assert steady_state_s(thermal25, c, thermal25.n0) == pytest.approx(
        expected, rel=1e-12)


def test_steady_state_anchor(profile, thermal25):
    value = steady_state_s(thermal25, profile.constants, thermal25.n_dc)
    assert value == pytest.approx(1.78225061848864e17, rel=1e-12)


def test_steady_state_matches_damped_iteration(profile, thermal25):
    c = profile.constants
    n = thermal25.n_dc
    s = 0.0
    step = 0.2 * c.tau_p
    for _ in range(120):
        _, ds_dt = derivatives((n, s), 0.0, thermal25, c)
        s = s + step * ds_dt
    closed = steady_state_s(thermal25, c, n)
    assert s == pytest.approx(closed, rel=1e-12)


def test_steady_state_above_threshold(profile, thermal25):
    c = profile.constants
    with pytest.raises(NoSteadyStateError):
        steady_state_s(thermal25, c, thermal25.n_th)
    with pytest.raises(NoSteadyStateError):
        steady_state_s(thermal25, c, 2.0 * thermal25.n_th)


def test_integrate_validation(profile, thermal25):
    c = profile.constants
    drive = single_pulse_drive(profile)
    with pytest.raises(ValueError):
        integrate(thermal25, c, drive, 0.0, 1e-9)
    with pytest.raises(ValueError):
        integrate(thermal25, c, drive, 1e-12, 1e-13)
    with pytest.raises(ValueError):
        integrate(thermal25, c, drive, 1e-12, 1e-9, initial=(-1.0, 0.0))


def test_integrate_shape_and_nonnegativity(profile, thermal25):
    traj = integrate(thermal25, profile.constants, single_pulse_drive(profile),
                     1e-13, 0.5e-9)
    assert len(traj.times) == 5001
    assert traj.dt == pytest.approx(1e-13, rel=1e-12)
    assert np.all(traj.n >= 0.0)
    assert np.all(traj.s >= 0.0)
    steps = np.diff(traj.times)
    assert steps.max() - steps.min() < 1e-10 * steps.max()


def test_dc_operating_point_is_stationary(profile, thermal25):
    # DC drive only: the AC pulse is deferred past the horizon
    drive = single_pulse_drive(profile, start_offset=1.0)
    traj = integrate(thermal25, profile.constants, drive, DEFAULT_DT_PULSE,
                     5e-9)
    n_drift = np.abs(traj.n / thermal25.n_dc - 1.0).max()
    s_drift = np.abs(traj.s / traj.s[0] - 1.0).max()
    assert n_drift < 1e-9
    assert s_drift < 1e-9


def test_divergence_reports_time(profile, thermal25):
    drive = single_pulse_drive(profile)
    with pytest.raises(DivergenceError, match="exceeds the clamp limit") as err:
        integrate(thermal25, profile.constants, drive, 5e-11, 1e-9)
    assert "t = " in str(err.value)


def test_initial_photon_density_insensitive(profile, pulse25):
    thermal, _, reference = pulse25
    drive = single_pulse_drive(profile)
    traj = integrate(thermal, profile.constants, drive, DEFAULT_DT_PULSE,
                     2e-9, initial=(thermal.n_dc, 0.0))
    pm = extract_metrics(traj)
    assert pm.recovered == reference.recovered
    for name in ("t_on", "t_peak", "s_max", "pulse_energy"):
        a = getattr(pm, name)
        b = getattr(reference, name)
        assert abs(a - b) / abs(b) < 1e-3


def test_below_threshold_relaxation(profile, thermal25):
    c = profile.constants
    n_init = 0.5 * (thermal25.n_dc + thermal25.n0)
    drive = single_pulse_drive(profile, start_offset=1.0)
    traj = integrate(thermal25, c, drive, 1e-14, 3e-9,
                     initial=(n_init, steady_state_s(thermal25, c, n_init)))
    residual = traj.n - thermal25.n_dc
    assert np.all(residual > 0.0)
    assert np.all(np.diff(residual) <= 0.0)
    idx = np.nonzero(residual >= residual[0] / 10.0)[0]
    slope, _ = np.polyfit(traj.times[idx], np.log(residual[idx]), 1)
    tau_fit = -1.0 / slope
    assert abs(tau_fit - thermal25.tau_n) / thermal25.tau_n < 0.02


def train_drive(profile, n_pulses, period=1.25e-9):
    return DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                         pulse_duration=profile.pulse_duration,
                         period=period, n_pulses=n_pulses)


def test_train_validation(profile, thermal25):
    c = profile.constants
    with pytest.raises(ValueError):
        simulate_train(thermal25, c, single_pulse_drive(profile), 1e-12)
    one = DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                        pulse_duration=profile.pulse_duration,
                        period=1.25e-9, n_pulses=1)
    with pytest.raises(ValueError):
        simulate_train(thermal25, c, one, 1e-12)
    with pytest.raises(ValueError):
        simulate_train(thermal25, c, train_drive(profile, 2), 1e-12,
                       settle_cycles=-1)


def test_train_records_edge_densities(profile, constants):
    thermal = thermal_state(constants, 45.0, profile.j_dc)
    traj = simulate_train(thermal, constants, train_drive(profile, 3),
                          DEFAULT_DT_TRAIN)
    assert len(traj.edge_n) == 3
    assert traj.edge_n[0] == thermal.n_dc
    for k, edge in enumerate(traj.drive.edge_times()):
        i = int(round(edge / traj.dt))
        assert traj.edge_n[k] == traj.n[i]


def test_train_settle_matches_tail_of_longer_run(profile, constants):
    thermal = thermal_state(constants, 45.0, profile.j_dc)
    dt = DEFAULT_DT_TRAIN
    full = simulate_train(thermal, constants, train_drive(profile, 3), dt)
    settled = simulate_train(thermal, constants, train_drive(profile, 2), dt,
                             settle_cycles=1)
    first = int(round(1.25e-9 / dt))
    assert np.array_equal(settled.n, full.n[first:])
    assert np.array_equal(settled.s, full.s[first:])
    assert settled.times[0] == 0.0
    assert np.array_equal(settled.edge_n, full.edge_n[1:])


def test_trajectory_csv_round_trip(profile, thermal25):
    traj = integrate(thermal25, profile.constants, single_pulse_drive(profile),
                     1e-12, 2e-10)
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "time_s,n_m3,s_m3"
    assert len(lines) == len(traj.times) + 1
    parsed = np.array([[float(x) for x in line.split(",")]
                       for line in lines[1:]])
    assert np.array_equal(parsed[:, 0], traj.times)
    assert np.array_equal(parsed[:, 1], traj.n)
    assert np.array_equal(parsed[:, 2], traj.s)


def test_trajectory_csv_decimation(profile, thermal25):
    traj = integrate(thermal25, profile.constants, single_pulse_drive(profile),
                     1e-12, 2e-10)
    buf = io.StringIO()
    write_trajectory_csv(traj, buf, decimate=4)
    assert len(buf.getvalue().splitlines()) == 1 + len(traj.times[::4])
    with pytest.raises(ValueError):
        write_trajectory_csv(traj, buf, decimate=0)
