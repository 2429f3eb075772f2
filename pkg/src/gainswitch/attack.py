"""Photon-number-splitting attack balance for decoy-state links.

The eavesdropper heats the transmitter so that signal and decoy pulses are
attenuated by different factors (alpha and beta_d), replaces the channel
with one of transmittance eta_prime, and blocks a fraction p_block of the
single photons in decoy pulses. The module solves the two count-rate
balance conditions for eta_prime and p_block in closed form and scans the
transmission distance for feasibility.
"""

import math
from dataclasses import dataclass

from scipy.optimize import brentq


class NoCrossingError(ValueError):
    """No feasibility boundary exists inside the searched distance range."""


@dataclass(frozen=True)
class AttackScenario:
    """Inputs of the attack: source intensities, detector, and channel."""

    mu: float                  # signal mean photon number
    nu: float                  # decoy mean photon number
    alpha: float               # signal attenuation factor under heating
    beta_d: float              # decoy attenuation factor under heating
    p_dis: float               # probability Eve distinguishes signal vs decoy
    y0: float                  # dark count rate
    eta0: float                # detection-side transmittance prefactor
    delta_db_per_km: float     # channel loss coefficient, dB/km
    length_km: float | None = None  # transmission distance, km

    def __post_init__(self):
        if not (self.mu > self.nu > 0.0):
            raise ValueError(f"need mu > nu > 0, got mu={self.mu!r}, nu={self.nu!r}")
        if not (1.0 > self.alpha > self.beta_d > 0.0):
            raise ValueError(
                f"need 1 > alpha > beta_d > 0, got alpha={self.alpha!r}, "
                f"beta_d={self.beta_d!r}")
        if not (0.0 < self.p_dis <= 1.0):
            raise ValueError(f"p_dis must lie in (0, 1], got {self.p_dis!r}")
        if self.y0 < 0.0:
            raise ValueError(f"y0 must be nonnegative, got {self.y0!r}")
        if not (0.0 < self.eta0 <= 1.0):
            raise ValueError(f"eta0 must lie in (0, 1], got {self.eta0!r}")
        if self.delta_db_per_km <= 0.0:
            raise ValueError(
                f"delta_db_per_km must be positive, got {self.delta_db_per_km!r}")
        if self.length_km is not None and self.length_km <= 0.0:
            raise ValueError(f"length_km must be positive, got {self.length_km!r}")


@dataclass(frozen=True)
class AttackSolution:
    """Solved attack parameters at one transmission distance."""

    length_km: float
    eta: float                      # no-attack overall transmittance
    eta_prime: float                # required transmittance under attack
    eta_ratio: float                # eta_prime / eta
    p_block: float                  # decoy single-photon blocking probability
    delta_prime_db_per_km: float    # implied replacement-channel loss, dB/km
    feasible: bool                  # eta_prime <= eta0 and 0 < p_block < 1
    residual_signal: float          # signal balance residual, absolute
    residual_decoy: float           # decoy balance residual, absolute


def channel_transmittance(eta0, delta_db_per_km, length_km):
    """Overall transmittance eta0 * 10^(-delta*L/10) of the honest channel."""
    return eta0 * 10.0 ** (-delta_db_per_km * length_km / 10.0)


def yield_n(n, eta, y0):
    """Detection probability of an n-photon pulse: 1 - (1-eta)^n + y0."""
    return 1.0 - (1.0 - eta) ** n + y0


def count_rate_no_attack(mean, eta, y0):
    """Poisson-averaged gain y0 + 1 - exp(-eta*mean) of an undisturbed link."""
    return y0 - math.expm1(-eta * mean)


def count_rate_decoy_attacked(scenario, eta_prime, p_block):
    """Decoy-state gain under the attack.

    Single photons are blocked with probability p_block (their detector
    contribution is removed, dark counts remain); all other photon numbers
    see the replacement channel eta_prime. When Eve fails to distinguish
    the state (probability 1 - p_dis) she blocks everything and only dark
    counts survive.
    """
    nu_p = scenario.beta_d * scenario.nu
    distinguished = (scenario.y0 - math.expm1(-nu_p * eta_prime)
                     - p_block * nu_p * math.exp(-nu_p) * eta_prime)
    return scenario.p_dis * distinguished + (1.0 - scenario.p_dis) * scenario.y0


def count_rate_signal_attacked(scenario, eta_prime):
    """Signal-state gain under the attack.

    Multiphoton pulses are split and forwarded with yield eta_prime + y0;
    vacuum and single-photon pulses contribute dark counts only.
    """
    mu_p = scenario.alpha * scenario.mu
    single_or_vacuum = (mu_p + 1.0) * math.exp(-mu_p)
    multi = 1.0 - single_or_vacuum
    distinguished = (multi * (eta_prime + scenario.y0)
                     + single_or_vacuum * scenario.y0)
    return scenario.p_dis * distinguished + (1.0 - scenario.p_dis) * scenario.y0


def solve_attack(scenario, length_km=None):
    """Solve both balance conditions at one distance.

    eta_prime solves count_rate_signal_attacked = count_rate_no_attack(mu)
    (linear in eta_prime), then p_block solves the decoy balance. Closed
    forms are verified by residual substitution; if a closed form ever
    drifts beyond 1e-8 the residual-zeroing root is used instead.
    """
    length = scenario.length_km if length_km is None else length_km
    if length is None:
        raise ValueError("scenario has no length_km and none was given")
    sc = scenario
    eta = channel_transmittance(sc.eta0, sc.delta_db_per_km, length)
    q_mu = count_rate_no_attack(sc.mu, eta, sc.y0)
    q_nu = count_rate_no_attack(sc.nu, eta, sc.y0)

    mu_p = sc.alpha * sc.mu
    single_or_vacuum = (mu_p + 1.0) * math.exp(-mu_p)
    multi = 1.0 - single_or_vacuum
    eta_prime = ((q_mu - (1.0 - sc.p_dis) * sc.y0) / sc.p_dis
                 - single_or_vacuum * sc.y0) / multi - sc.y0
    residual_signal = count_rate_signal_attacked(sc, eta_prime) - q_mu
    if abs(residual_signal) > 1e-8 and 0.0 < eta_prime:
        eta_prime = brentq(
            lambda x: count_rate_signal_attacked(sc, x) - q_mu,
            0.0, 1.0, xtol=1e-16)
        residual_signal = count_rate_signal_attacked(sc, eta_prime) - q_mu

    nu_p = sc.beta_d * sc.nu
    if eta_prime > 0.0:
        p_block = ((sc.y0 - math.expm1(-nu_p * eta_prime)
                    - (q_nu - (1.0 - sc.p_dis) * sc.y0) / sc.p_dis)
                   / (nu_p * math.exp(-nu_p) * eta_prime))
    else:
        p_block = math.nan
    residual_decoy = count_rate_decoy_attacked(sc, eta_prime, p_block) - q_nu
    if abs(residual_decoy) > 1e-8:
        lo = count_rate_decoy_attacked(sc, eta_prime, 0.0) - q_nu
        hi = count_rate_decoy_attacked(sc, eta_prime, 1.0) - q_nu
        if lo * hi < 0.0:
            p_block = brentq(
                lambda p: count_rate_decoy_attacked(sc, eta_prime, p) - q_nu,
                0.0, 1.0, xtol=1e-16)
            residual_decoy = count_rate_decoy_attacked(sc, eta_prime, p_block) - q_nu

    feasible = (0.0 <= eta_prime <= sc.eta0) and (0.0 < p_block < 1.0)
    if eta_prime > 0.0 and length > 0.0:
        delta_prime = (sc.delta_db_per_km
                       - 10.0 * math.log10(eta_prime / eta) / length)
    else:
        delta_prime = math.nan
    return AttackSolution(
        length_km=length,
        eta=eta,
        eta_prime=eta_prime,
        eta_ratio=eta_prime / eta,
        p_block=p_block,
        delta_prime_db_per_km=delta_prime,
        feasible=feasible,
        residual_signal=residual_signal,
        residual_decoy=residual_decoy,
    )


def min_feasible_distance(scenario, resolution_km=0.01, l_max=500.0):
    """Shortest distance at which the attack is feasible (eta_prime = eta0).

    The required eta_prime falls with distance while eta0 is fixed, so the
    boundary is found by bisection. Raises NoCrossingError when even l_max
    is infeasible.
    """
    if resolution_km <= 0.0:
        raise ValueError(f"resolution_km must be positive, got {resolution_km!r}")

    def excess(length):
        return solve_attack(scenario, length).eta_prime - scenario.eta0

    lo = 1e-9
    if excess(lo) <= 0.0:
        return 0.0
    if excess(l_max) > 0.0:
        raise NoCrossingError(
            f"attack infeasible everywhere in (0, {l_max}] km")
    hi = l_max
    while hi - lo > resolution_km:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_distance(scenario, l_min, l_max, step):
    """Solve the attack on a distance grid from l_min to l_max inclusive."""
    if not (l_min < l_max):
        raise ValueError(f"need l_min < l_max, got {l_min!r}, {l_max!r}")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    solutions = []
    k = 0
    length = l_min
    while length <= l_max + 1e-9:
        solutions.append(solve_attack(scenario, length))
        k += 1
        length = l_min + k * step
    return solutions


SCAN_CSV_HEADER = "L_km,eta,eta_prime,eta_ratio,p_block,delta_prime_db_km,feasible"


def write_scan_csv(solutions, stream):
    """Write AttackSolution rows as CSV with round-trip float formatting."""
    stream.write(SCAN_CSV_HEADER + "\n")
    for s in solutions:
        stream.write(
            f"{s.length_km!r},{s.eta!r},{s.eta_prime!r},{s.eta_ratio!r},"
            f"{s.p_block!r},{s.delta_prime_db_per_km!r},"
            f"{str(s.feasible).lower()}\n")


def summarize_scan(solutions, minimum_distance=None):
    """Reduce a distance scan to the headline feasibility numbers."""
    feasible = [s for s in solutions if s.feasible]
    summary = {
        "points": len(solutions),
        "feasible_points": len(feasible),
        "min_feasible_distance_km": minimum_distance,
    }
    if feasible:
        summary["eta_ratio_min"] = min(s.eta_ratio for s in feasible)
        summary["eta_ratio_max"] = max(s.eta_ratio for s in feasible)
        summary["p_block_min"] = min(s.p_block for s in feasible)
        summary["p_block_max"] = max(s.p_block for s in feasible)
    else:
        summary["eta_ratio_min"] = None
        summary["eta_ratio_max"] = None
        summary["p_block_min"] = None
        summary["p_block_max"] = None
    return summary
