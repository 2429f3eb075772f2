"""Brute-force cross-checks for the closed-form and integrator paths.

Everything here trades speed for independence: count rates are evaluated
as explicitly truncated Poisson sums, and trajectories are re-integrated
with a first-order scheme at a much finer step. Shared code is limited to
`derivatives` and `yield_n`, so these checks exercise the algebra and the
integration scheme rather than re-testing transcription of the physics.
"""

import math
from dataclasses import dataclass

import numpy as np

from .attack import yield_n
from .dynamics import (CLAMP_LIMIT, DEFAULT_DT_PULSE, DivergenceError,
                       Trajectory, derivatives, steady_state_s)

POISSON_TAIL_LIMIT = 1e-15


class TruncationError(RuntimeError):
    """Truncated Poisson sum left a tail above the allowed bound."""


@dataclass(frozen=True)
class OracleReport:
    """One cross-check outcome."""

    quantity: str
    main_value: float
    oracle_value: float
    deviation: float    # relative unless the quantity says otherwise
    tolerance: float
    passed: bool


def _report(quantity, main_value, oracle_value, tolerance, absolute=False):
    if absolute:
        deviation = abs(main_value - oracle_value)
    else:
        scale = max(abs(main_value), abs(oracle_value), 1e-300)
        deviation = abs(main_value - oracle_value) / scale
    return OracleReport(quantity=quantity, main_value=main_value,
                        oracle_value=oracle_value, deviation=deviation,
                        tolerance=tolerance, passed=deviation <= tolerance)


def _poisson_weights(mean, n_max):
    """Poisson pmf values 0..n_max with an explicit tail bound check."""
    if n_max < 20:
        raise ValueError("n_max must be at least 20")
    if mean < 0:
        raise ValueError("mean must be non-negative")
    weights = []
    w = math.exp(-mean)
    for n in range(n_max + 1):
        weights.append(w)
        w *= mean / (n + 1)
    # geometric bound: terms past n_max shrink by at least mean/(n_max+2)
    ratio = mean / (n_max + 2)
    if ratio >= 1.0:
        raise TruncationError(f"mean {mean} too large for n_max {n_max}")
    tail = w / (1.0 - ratio)
    if tail >= POISSON_TAIL_LIMIT:
        raise TruncationError(
            f"Poisson tail bound {tail:.3e} exceeds {POISSON_TAIL_LIMIT:.0e} "
            f"(mean {mean}, n_max {n_max})")
    return weights


def poisson_gain_oracle(mean, eta, y0, n_max=60):
    """Count rate as an explicit photon-number sum over untouched yields."""
    weights = _poisson_weights(mean, n_max)
    return math.fsum(w * yield_n(n, eta, y0) for n, w in enumerate(weights))


def decoy_attacked_gain_oracle(scenario, eta_prime, p_block, n_max=60):
    """Attacked decoy count rate, summed term by term.

    Eve blocks a forwarded single photon with probability p_block; pulses
    with two or more photons pass with the plain multiphoton yield.
    """
    nu_prime = scenario.beta_d * scenario.nu
    weights = _poisson_weights(nu_prime, n_max)
    y0 = scenario.y0
    terms = []
    for n, w in enumerate(weights):
        if n == 1:
            y = (1.0 - p_block) * eta_prime + y0
        else:
            y = yield_n(n, eta_prime, y0)
        terms.append(w * y)
    seen = math.fsum(terms)
    return scenario.p_dis * seen + (1.0 - scenario.p_dis) * y0


def signal_attacked_gain_oracle(scenario, eta_prime, n_max=60):
    """Attacked signal count rate, summed term by term.

    Multiphoton pulses are split and exactly one photon is forwarded
    (yield eta_prime + y0); vacuum and single-photon pulses are blocked and
    contribute dark counts only.
    """
    mu_prime = scenario.alpha * scenario.mu
    weights = _poisson_weights(mu_prime, n_max)
    y0 = scenario.y0
    forwarded = eta_prime + y0
    terms = []
    for n, w in enumerate(weights):
        terms.append(w * (forwarded if n >= 2 else y0))
    seen = math.fsum(terms)
    return scenario.p_dis * seen + (1.0 - scenario.p_dis) * y0


def euler_reference_trajectory(thermal, constants, drive, dt_fine, t_end,
                               initial=None, store_every=1):
    """Forward first-order integration at a fine step, for cross-checks only.

    store_every decimates storage (the step count must divide evenly);
    the stored grid stays uniform so the result is a normal Trajectory.
    """
    if dt_fine <= 0:
        raise ValueError("dt_fine must be positive")
    if dt_fine > DEFAULT_DT_PULSE / 50.0:
        raise ValueError(
            f"dt_fine must not exceed {DEFAULT_DT_PULSE / 50.0:.1e} s")
    steps = int(round(t_end / dt_fine))
    if steps < 1:
        raise ValueError("t_end must cover at least one step")
    if store_every < 1 or steps % store_every:
        raise ValueError("store_every must evenly divide the step count")

    if initial is None:
        n = thermal.n_dc
        s = steady_state_s(thermal, constants, n)
    else:
        n, s = float(initial[0]), float(initial[1])
        if n < 0 or s < 0:
            raise ValueError("initial densities must be non-negative")

    h = dt_fine
    current = drive.current
    deriv = derivatives
    isfinite = math.isfinite
    n_out = [n]
    s_out = [s]
    max_n = n if n > 0.0 else 1.0
    max_s = s if s > 0.0 else 1.0

    for i in range(steps):
        dn_dt, ds_dt = deriv((n, s), current(i * h), thermal, constants)
        n += h * dn_dt
        s += h * ds_dt
        if not (isfinite(n) and isfinite(s)):
            raise DivergenceError(f"non-finite state at t = {(i + 1) * h:.6e} s")
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
        if (i + 1) % store_every == 0:
            n_out.append(n)
            s_out.append(s)

    stored = steps // store_every
    times = np.arange(stored + 1, dtype=float) * (h * store_every)
    return Trajectory(times=times, n=np.asarray(n_out), s=np.asarray(s_out),
                      thermal=thermal, drive=drive, edge_n=None)


def run_verification_suite(profile, quick=False):
    """Cross-check the closed forms and the integrator; returns OracleReports.

    quick=True skips the slow fine-step trajectory comparisons.
    """
    from . import attack as atk
    from . import metrics as met
    from .dynamics import DriveWaveform, integrate

    sc = profile.attack
    reports = []

    length = 100.0
    eta = atk.channel_transmittance(sc.eta0, sc.delta_db_per_km, length)
    q_mu = atk.count_rate_no_attack(sc.mu, eta, sc.y0)
    q_nu = atk.count_rate_no_attack(sc.nu, eta, sc.y0)
    reports.append(_report(
        "count_rate_signal_vs_poisson_sum", q_mu,
        poisson_gain_oracle(sc.mu, eta, sc.y0), 1e-12))
    reports.append(_report(
        "count_rate_decoy_vs_poisson_sum", q_nu,
        poisson_gain_oracle(sc.nu, eta, sc.y0), 1e-12))

    reports.append(_report(
        "decoy_attacked_vs_poisson_sum",
        atk.count_rate_decoy_attacked(sc, 0.01, 0.5),
        decoy_attacked_gain_oracle(sc, 0.01, 0.5), 1e-12))
    reports.append(_report(
        "signal_attacked_vs_poisson_sum",
        atk.count_rate_signal_attacked(sc, 0.01),
        signal_attacked_gain_oracle(sc, 0.01), 1e-12))

    sol = atk.solve_attack(sc, length)
    reports.append(_report(
        "signal_balance_residual", sol.residual_signal, 0.0, 1e-10,
        absolute=True))
    reports.append(_report(
        "decoy_balance_residual", sol.residual_decoy, 0.0, 1e-10,
        absolute=True))

    if quick:
        return reports

    from .thermal import thermal_state

    constants = profile.constants
    thermal = thermal_state(constants, 25.0, profile.j_dc)
    drive = DriveWaveform(j_dc=profile.j_dc, j_ac=profile.j_ac_signal,
                          pulse_duration=profile.pulse_duration)
    horizon = 0.5e-9
    main = integrate(thermal, constants, drive, DEFAULT_DT_PULSE, horizon)
    main_pm = met.extract_metrics(main)
    fine = euler_reference_trajectory(
        thermal, constants, drive, DEFAULT_DT_PULSE / 50.0, horizon,
        store_every=50)
    fine_pm = met.extract_metrics(fine)
    reports.append(_report(
        "integrator_smax_vs_fine_step", main_pm.s_max, fine_pm.s_max, 5e-3))
    reports.append(_report(
        "integrator_tpeak_vs_fine_step", main_pm.t_peak, fine_pm.t_peak,
        1e-12, absolute=True))

    halved = integrate(thermal, constants, drive, DEFAULT_DT_PULSE / 2.0,
                       horizon)
    halved_pm = met.extract_metrics(halved)
    for name in ("t_on", "t_peak", "s_max", "pulse_energy"):
        reports.append(_report(
            f"dt_halving_{name}", getattr(main_pm, name),
            getattr(halved_pm, name), 1e-3))
    return reports


ORACLE_CSV_HEADER = "quantity,main_value,oracle_value,deviation,tolerance,passed"


def write_oracle_csv(reports, stream):
    """Write OracleReport rows as CSV."""
    stream.write(ORACLE_CSV_HEADER + "\n")
    for r in reports:
        stream.write(
            f"{r.quantity},{r.main_value!r},{r.oracle_value!r},"
            f"{r.deviation!r},{r.tolerance!r},{str(r.passed).lower()}\n")
