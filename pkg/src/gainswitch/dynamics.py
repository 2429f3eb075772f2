"""Single-mode rate-equation dynamics under rectangular current drive.

Carrier density n(t) and photon density s(t) obey

    dn/dt = j(t)/(q d) - n/tau_n - g0 (n - n0) s
    ds/dt = gamma g0 (n - n0) s - s/tau_p + gamma beta_sp n/tau_n

with the temperature-scaled coefficients taken from a ThermalState. The
integrator is a fixed-step classic 4th-order scheme; the drive current is
sampled at the sub-step times, so rectangular edges are smeared by at most
one step (negligible at the default 10 fs step).
"""

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_DT_PULSE = 10e-15
DEFAULT_DT_TRAIN = 20e-15

# a clamp larger than this (relative to the running scale of the variable)
# means the step size is wrong, not that the physics grazed zero
CLAMP_LIMIT = 1e-6


class DivergenceError(RuntimeError):
    """Integration produced a non-finite or badly negative state."""


class NoSteadyStateError(ValueError):
    """No below-threshold photon steady state exists for this carrier density."""


@dataclass(frozen=True)
class DriveWaveform:
    """Rectangular current drive: DC bias plus one or more AC pulses."""

    j_dc: float                 # A/m^2
    j_ac: float                 # A/m^2, added to j_dc during a pulse
    pulse_duration: float       # s
    period: float = None        # s; None for single-pulse mode
    n_pulses: int = 1
    start_offset: float = 0.0   # s, rising edge of the first pulse

    def __post_init__(self):
        if self.pulse_duration <= 0:
            raise ValueError("pulse_duration must be positive")
        if self.j_ac <= 0:
            raise ValueError("j_ac must be positive")
        if self.j_dc < 0:
            raise ValueError("j_dc must be non-negative")
        if self.n_pulses < 1:
            raise ValueError("n_pulses must be at least 1")
        if self.period is None:
            if self.n_pulses != 1:
                raise ValueError("multiple pulses require a period")
        elif self.period <= self.pulse_duration:
            raise ValueError("period must exceed pulse_duration")

    def current(self, t):
        """Injection current density at time t, A/m^2."""
        tt = t - self.start_offset
        if tt < 0.0:
            return self.j_dc
        if self.period is None:
            return self.j_dc + self.j_ac if tt < self.pulse_duration else self.j_dc
        cycle = int(tt // self.period)
        if cycle >= self.n_pulses:
            return self.j_dc
        return (self.j_dc + self.j_ac
                if tt - cycle * self.period < self.pulse_duration
                else self.j_dc)

    def edge_times(self):
        """Rising-edge times of every AC pulse."""
        if self.period is None:
            return [self.start_offset]
        return [self.start_offset + k * self.period for k in range(self.n_pulses)]


@dataclass(frozen=True)
class Trajectory:
    """Densely sampled solution of the rate equations."""

    times: np.ndarray           # s, uniform spacing
    n: np.ndarray               # m^-3
    s: np.ndarray               # m^-3
    thermal: object
    drive: DriveWaveform
    edge_n: np.ndarray = field(default=None)  # carrier density at each rising edge

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])


def derivatives(state, j_now, thermal, constants):
    """Right-hand side of the rate equations at one state point."""
    n, s = state
    gain = thermal.g0 * (n - thermal.n0)
    dn_dt = (j_now / (constants.q * constants.d)
             - n / thermal.tau_n
             - gain * s)
    ds_dt = (constants.gamma * gain * s
             - s / constants.tau_p
             + constants.gamma * constants.beta_sp * n / thermal.tau_n)
    return dn_dt, ds_dt


def steady_state_s(thermal, constants, n):
    """Photon density solving ds/dt = 0 at fixed below-threshold n."""
    denom = 1.0 / constants.tau_p - constants.gamma * thermal.g0 * (n - thermal.n0)
    if denom <= 0.0:
        raise NoSteadyStateError(
            f"carrier density {n:.6e} m^-3 is at or above threshold "
            f"{thermal.n_th:.6e} m^-3; photon density has no steady state")
    return constants.gamma * constants.beta_sp * (n / thermal.tau_n) / denom


def integrate(thermal, constants, drive, dt, t_end, initial=None):
    """Integrate the rate equations from t = 0 to t_end with fixed step dt.

    initial defaults to the DC operating point (n_dc, steady_state_s(n_dc)).
    Every step is stored. Raises DivergenceError if the state leaves the
    physical domain by more than roundoff.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < dt:
        raise ValueError("t_end must cover at least one step")
    if initial is None:
        n = thermal.n_dc
        s = steady_state_s(thermal, constants, n)
    else:
        n, s = float(initial[0]), float(initial[1])
        if n < 0 or s < 0:
            raise ValueError("initial densities must be non-negative")

    steps = int(round(t_end / dt))
    h = dt
    hh = 0.5 * h
    sixth = h / 6.0

    # hoisted coefficients; the loop below is the hot path
    inv_qd = 1.0 / (constants.q * constants.d)
    itn = 1.0 / thermal.tau_n
    itp = 1.0 / constants.tau_p
    g0 = thermal.g0
    n0 = thermal.n0
    gg = constants.gamma * g0
    sp = constants.gamma * constants.beta_sp * itn
    current = drive.current
    isfinite = math.isfinite

    n_out = [n]
    s_out = [s]
    append_n = n_out.append
    append_s = s_out.append
    max_n = n if n > 0.0 else 1.0
    max_s = s if s > 0.0 else 1.0

    for i in range(steps):
        t = i * h
        j1 = current(t)
        jm = current(t + hh)
        j4 = current(t + h)

        gn = n - n0
        k1n = j1 * inv_qd - n * itn - g0 * gn * s
        k1s = gg * gn * s - s * itp + sp * n

        na = n + hh * k1n
        sa = s + hh * k1s
        gn = na - n0
        k2n = jm * inv_qd - na * itn - g0 * gn * sa
        k2s = gg * gn * sa - sa * itp + sp * na

        nb = n + hh * k2n
        sb = s + hh * k2s
        gn = nb - n0
        k3n = jm * inv_qd - nb * itn - g0 * gn * sb
        k3s = gg * gn * sb - sb * itp + sp * nb

        nc = n + h * k3n
        sc = s + h * k3s
        gn = nc - n0
        k4n = j4 * inv_qd - nc * itn - g0 * gn * sc
        k4s = gg * gn * sc - sc * itp + sp * nc

        n = n + sixth * (k1n + 2.0 * (k2n + k3n) + k4n)
        s = s + sixth * (k1s + 2.0 * (k2s + k3s) + k4s)

        if not (isfinite(n) and isfinite(s)):
            raise DivergenceError(
                f"non-finite state at t = {(i + 1) * h:.6e} s")
        if n < 0.0:
            if -n > CLAMP_LIMIT * max_n:
                raise DivergenceError(
                    f"carrier density {n:.3e} at t = {(i + 1) * h:.6e} s "
                    f"exceeds the clamp limit")
            n = 0.0
        elif n > max_n:
            max_n = n
        if s < 0.0:
            if -s > CLAMP_LIMIT * max_s:
                raise DivergenceError(
                    f"photon density {s:.3e} at t = {(i + 1) * h:.6e} s "
                    f"exceeds the clamp limit")
            s = 0.0
        elif s > max_s:
            max_s = s

        append_n(n)
        append_s(s)

    times = np.arange(steps + 1, dtype=float) * h
    return Trajectory(times=times,
                      n=np.asarray(n_out),
                      s=np.asarray(s_out),
                      thermal=thermal,
                      drive=drive,
                      edge_n=None)


def simulate_train(thermal, constants, drive, dt, settle_cycles=0):
    """Integrate a periodic pulse train and record per-edge carrier densities.

    The drive must be periodic with n_pulses >= 2. settle_cycles extra
    cycles are prepended and discarded; the returned trajectory starts at
    the first retained rising edge with the usual DC initial state applied
    at the very beginning of the settle run.
    """
    if drive.period is None:
        raise ValueError("simulate_train needs a periodic drive")
    if drive.n_pulses < 2:
        raise ValueError("a train needs at least 2 pulses")
    if settle_cycles < 0:
        raise ValueError("settle_cycles must be non-negative")

    total = drive.n_pulses + settle_cycles
    full_drive = DriveWaveform(
        j_dc=drive.j_dc, j_ac=drive.j_ac,
        pulse_duration=drive.pulse_duration, period=drive.period,
        n_pulses=total, start_offset=drive.start_offset)
    t_end = drive.start_offset + total * drive.period
    traj = integrate(thermal, constants, full_drive, dt, t_end)

    skip = settle_cycles * drive.period
    if settle_cycles:
        first = int(round((drive.start_offset + skip) / dt))
        times = traj.times[first:] - traj.times[first]
        n = traj.n[first:]
        s = traj.s[first:]
        shifted = DriveWaveform(
            j_dc=drive.j_dc, j_ac=drive.j_ac,
            pulse_duration=drive.pulse_duration, period=drive.period,
            n_pulses=drive.n_pulses, start_offset=0.0)
    else:
        times, n, s = traj.times, traj.n, traj.s
        shifted = drive

    edges = shifted.edge_times()
    edge_n = np.array([n[int(round(e / dt))] for e in edges])
    return Trajectory(times=times, n=n, s=s, thermal=thermal,
                      drive=shifted, edge_n=edge_n)


def write_trajectory_csv(traj, stream, decimate=1):
    """Write time_s,n_m3,s_m3 rows with round-trip float formatting."""
    if decimate < 1:
        raise ValueError("decimate must be at least 1")
    stream.write("time_s,n_m3,s_m3\n")
    times = traj.times[::decimate]
    ns = traj.n[::decimate]
    ss = traj.s[::decimate]
    for t, nv, sv in zip(times, ns, ss):
        stream.write(f"{float(t)!r},{float(nv)!r},{float(sv)!r}\n")
