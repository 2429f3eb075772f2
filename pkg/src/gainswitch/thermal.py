"""Temperature scaling of semiconductor laser parameters.

Everything here is SI (m, s, A/m^2, m^-3, m^3/s). Temperatures are degrees
Celsius; the scaling laws use only temperature differences, which are the
same in celsius and kelvin.
"""

import math
from dataclasses import dataclass

ELEMENTARY_CHARGE = 1.602176634e-19  # C, exact SI value


class AboveThresholdBiasError(ValueError):
    """DC bias alone pushes the carrier density to or past threshold."""


@dataclass(frozen=True)
class LaserConstants:
    """Device constants plus the reference parameter values quoted at t_ref."""

    d: float          # active region thickness, m
    gamma: float      # mode confinement factor
    beta_sp: float    # spontaneous emission coupling fraction
    tau_p: float      # photon lifetime, s
    t_ref: float      # reference temperature, degC
    g0_ref: float     # differential gain at t_ref, m^3/s
    n0_ref: float     # transparency carrier density at t_ref, m^-3
    tau_n_ref: float  # carrier lifetime at t_ref, s
    t0: float         # diode characteristic temperature, K
    t0a: float        # active region characteristic temperature, K
    q: float = ELEMENTARY_CHARGE  # elementary charge, C

    def __post_init__(self):
        for name in ("q", "d", "gamma", "beta_sp", "tau_p", "g0_ref",
                     "n0_ref", "tau_n_ref", "t0", "t0a"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.gamma > 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma!r}")
        if self.beta_sp > 1.0:
            raise ValueError(f"beta_sp must lie in (0, 1], got {self.beta_sp!r}")
        if not math.isfinite(self.t_ref):
            raise ValueError(f"t_ref must be finite, got {self.t_ref!r}")


@dataclass(frozen=True)
class ThermalState:
    """Laser parameters evaluated at one operating temperature and DC bias."""

    temperature: float  # degC
    g0: float           # differential gain, m^3/s
    n0: float           # transparency carrier density, m^-3
    tau_n: float        # carrier lifetime, s
    n_th: float         # threshold carrier density, m^-3
    n_dc: float         # steady carrier density under DC bias, m^-3
    j_th: float         # threshold current density, A/m^2


def scale_parameters(constants, delta_t):
    """Scale (g0, n0, tau_n) away from the reference temperature.

    The gain falls and the transparency density rises with the same
    characteristic temperature t0a, so their product is invariant in
    temperature. The carrier lifetime combines both characteristic
    temperatures so that the threshold current density scales as
    exp(delta_t / t0).

    Parameters
    ----------
    constants : LaserConstants
    delta_t : float
        Temperature offset from t_ref in kelvin. Negative values (cooling)
        are valid.

    Returns
    -------
    (g0, n0, tau_n) tuple at the offset temperature.
    """
    if not math.isfinite(delta_t):
        raise ValueError(f"delta_t must be finite, got {delta_t!r}")
    ea = math.exp(delta_t / constants.t0a)
    g0 = constants.g0_ref / ea
    n0 = constants.n0_ref * ea
    tau_n = constants.tau_n_ref * ea / math.exp(delta_t / constants.t0)
    return g0, n0, tau_n


def thermal_state(constants, temperature, j_dc):
    """Build the full ThermalState at a temperature (degC) and DC bias (A/m^2)."""
    if not (math.isfinite(j_dc) and j_dc >= 0.0):
        raise ValueError(f"j_dc must be finite and nonnegative, got {j_dc!r}")
    g0, n0, tau_n = scale_parameters(constants, temperature - constants.t_ref)
    n_th = n0 + 1.0 / (g0 * constants.gamma * constants.tau_p)
    n_dc = j_dc * tau_n / (constants.q * constants.d)
    j_th = constants.q * constants.d * n_th / tau_n
    if n_dc >= n_th:
        raise AboveThresholdBiasError(
            f"j_dc={j_dc!r} A/m^2 gives n_dc={n_dc:.4e} >= n_th={n_th:.4e} "
            f"at {temperature} degC; not a gain-switched operating point")
    return ThermalState(temperature, g0, n0, tau_n, n_th, n_dc, j_th)


def threshold_current_ratio(constants, delta_t):
    """Ratio j_th(T + delta_t) / j_th(T), which equals exp(delta_t / t0)."""
    if not math.isfinite(delta_t):
        raise ValueError(f"delta_t must be finite, got {delta_t!r}")
    return math.exp(delta_t / constants.t0)
