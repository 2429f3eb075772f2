"""Scenario orchestration: single pulses, temperature sweeps, pulse trains.

Each scenario takes a Profile plus a few knobs and returns plain data.
Sweep points are independent, so the temperature sweep can fan out over a
process pool; results always come back in input order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dynamics import (DEFAULT_DT_PULSE, DEFAULT_DT_TRAIN, DriveWaveform,
                       integrate, simulate_train)
from .metrics import extract_metrics
from .thermal import thermal_state

DEFAULT_HORIZON = 2e-9
TRAIN_FLAG_BAND = 0.01


@dataclass(frozen=True)
class SweepRow:
    """One temperature point of a signal/decoy sweep."""

    temp_c: float
    thermal: object
    signal: object   # PulseMetrics
    decoy: object    # PulseMetrics


@dataclass(frozen=True)
class CycleRow:
    """Per-cycle observables of a pulse train."""

    cycle: int
    s_max: float
    n_initial: float
    flagged: bool    # n_initial above n_dc by more than the flag band


def state_amplitude(profile, state):
    """AC amplitude for 'signal' or 'decoy'."""
    if state == "signal":
        return profile.j_ac_signal
    if state == "decoy":
        return profile.j_ac_decoy
    raise ValueError(f"unknown state {state!r}, expected signal or decoy")


def run_pulse_scenario(profile, temp_c, state="signal", dt=DEFAULT_DT_PULSE,
                       t_end=DEFAULT_HORIZON, band=0.01):
    """Single rectangular pulse at one temperature: (thermal, traj, metrics)."""
    thermal = thermal_state(profile.constants, temp_c, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc,
                          j_ac=state_amplitude(profile, state),
                          pulse_duration=profile.pulse_duration)
    traj = integrate(thermal, profile.constants, drive, dt, t_end)
    pm = extract_metrics(traj, recovery_band=band)
    return thermal, traj, pm


def _sweep_point(args):
    profile, temp_c, dt, t_end, band = args
    thermal, _, signal = run_pulse_scenario(
        profile, temp_c, "signal", dt=dt, t_end=t_end, band=band)
    _, _, decoy = run_pulse_scenario(
        profile, temp_c, "decoy", dt=dt, t_end=t_end, band=band)
    return SweepRow(temp_c=temp_c, thermal=thermal, signal=signal, decoy=decoy)


def run_table_sweep(profile, temps, dt=DEFAULT_DT_PULSE,
                    t_end=DEFAULT_HORIZON, band=0.01, jobs=1):
    """Signal and decoy pulse metrics over a temperature list, input order."""
    argsets = [(profile, t, dt, t_end, band) for t in temps]
    if jobs > 1 and len(argsets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, argsets))
    return [_sweep_point(a) for a in argsets]


def run_train_scenario(profile, temp_c, frequency, n_pulses, state="signal",
                       dt=DEFAULT_DT_TRAIN, band=0.01, settle_cycles=0):
    """Periodic pulse train: (thermal, trajectory, [CycleRow...]).

    A cycle is flagged when its rising-edge carrier density sits more than
    1 % above the DC level, the signature of incomplete recovery.
    """
    if frequency <= 0:
        raise ValueError("frequency must be positive")
    period = 1.0 / frequency
    thermal = thermal_state(profile.constants, temp_c, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc,
                          j_ac=state_amplitude(profile, state),
                          pulse_duration=profile.pulse_duration,
                          period=period, n_pulses=n_pulses)
    traj = simulate_train(thermal, profile.constants, drive, dt,
                          settle_cycles=settle_cycles)
    limit = thermal.n_dc * (1.0 + TRAIN_FLAG_BAND)
    rows = []
    for k in range(n_pulses):
        pm = extract_metrics(traj, cycle_index=k, recovery_band=band)
        rows.append(CycleRow(cycle=k, s_max=pm.s_max, n_initial=pm.n_initial,
                             flagged=pm.n_initial > limit))
    return thermal, traj, rows


CYCLE_CSV_HEADER = "cycle,smax_m3,n_initial_m3,flagged"


def write_cycles_csv(rows, stream):
    """Write CycleRow entries as CSV."""
    stream.write(CYCLE_CSV_HEADER + "\n")
    for row in rows:
        stream.write(f"{row.cycle},{row.s_max!r},{row.n_initial!r},"
                     f"{str(row.flagged).lower()}\n")
