"""Parameter profiles: the embedded default and INI-style profile files.

A profile is structured text with a [laser] section carrying the device
constants, plus optional [drive] and [attack] sections. Laser and drive
entries are written "<value> <unit>" with one fixed accepted unit per key
(the unit the datasheet-style table quotes them in); values are converted
to SI exactly once, here, so the rest of the package never sees cm-based
units.
"""

import configparser
import io
import math
from dataclasses import dataclass

from .attack import AttackScenario
from .thermal import LaserConstants


class ConfigError(ValueError):
    """Malformed or inconsistent profile input."""


# key -> (required unit string, factor converting the quoted value to SI)
LASER_UNITS = {
    "g0_ref": ("cm^3/s", 1e-6),
    "n0_ref": ("cm^-3", 1e6),
    "tau_n_ref": ("ns", 1e-9),
    "tau_p": ("ps", 1e-12),
    "beta_sp": ("-", 1.0),
    "d": ("um", 1e-6),
    "gamma": ("-", 1.0),
    "j_ac": ("A/cm^2", 1e4),
    "j_dc": ("A/cm^2", 1e4),
    "t0": ("K", 1.0),
    "t0a": ("K", 1.0),
    "t_ref": ("degC", 1.0),
}

DRIVE_UNITS = {
    "j_ac_signal": ("A/cm^2", 1e4),
    "j_ac_decoy": ("A/cm^2", 1e4),
    "duration": ("ps", 1e-12),
}

# attack entries are dimensionless except the loss coefficient
ATTACK_KEYS = ("mu", "nu", "alpha", "beta_d", "p_dis", "y0", "eta0",
               "delta_db_per_km")

DEFAULT_PROFILE = """\
[laser]
g0_ref = 2.0e-6 cm^3/s
n0_ref = 1.0e18 cm^-3
tau_n_ref = 1.2 ns
tau_p = 5.0 ps
beta_sp = 0.001 -
d = 0.1 um
gamma = 0.5 -
j_ac = 2.4e4 A/cm^2
j_dc = 4.8e2 A/cm^2
t0 = 80.0 K
t0a = 100.0 K
t_ref = 25.0 degC

[drive]
j_ac_signal = 2.4e4 A/cm^2
j_ac_decoy = 2.0e4 A/cm^2
duration = 100.0 ps

[attack]
mu = 0.48
nu = 0.05
alpha = 0.8
beta_d = 0.4
p_dis = 0.8
y0 = 1.7e-6
eta0 = 0.045
delta_db_per_km = 0.21 dB/km
"""


@dataclass(frozen=True)
class Profile:
    """Fully ingested profile, SI units throughout."""

    constants: LaserConstants
    j_dc: float           # DC bias current density, A/m^2
    j_ac: float           # AC amplitude from the laser table, A/m^2
    j_ac_signal: float    # signal-state AC amplitude, A/m^2
    j_ac_decoy: float     # decoy-state AC amplitude, A/m^2
    pulse_duration: float  # s
    attack: AttackScenario


def _parse_entry(section, key, raw, unit_table):
    """Split '<value> <unit>', check the unit, and convert to SI."""
    expected_unit, factor = unit_table[key]
    parts = raw.split()
    if len(parts) != 2:
        raise ConfigError(
            f"[{section}] {key}: expected '<value> <unit>', got {raw!r}")
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: not a number: {parts[0]!r}") from None
    if parts[1] != expected_unit:
        raise ConfigError(
            f"[{section}] {key}: bad units {parts[1]!r}, expected {expected_unit!r}")
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key}: value must be finite, got {value!r}")
    return value * factor


def _parse_bare(section, key, raw, unit=None):
    """Parse a dimensionless entry, tolerating an optional unit suffix."""
    parts = raw.split()
    if len(parts) == 2 and unit is not None and parts[1] == unit:
        parts = parts[:1]
    if len(parts) != 1:
        raise ConfigError(
            f"[{section}] {key}: expected a bare number, got {raw!r}")
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: not a number: {parts[0]!r}") from None
    return value


def parse_profile(text, source="<embedded>"):
    """Parse profile text into a Profile; raises ConfigError on any problem."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        where = f"{source}:{lineno}" if lineno else source
        raise ConfigError(f"{where}: {exc.message}") from None

    known = {"laser", "drive", "attack"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"{source}: unknown section [{section}]")
    if not parser.has_section("laser"):
        raise ConfigError(f"{source}: missing required section [laser]")

    laser_raw = dict(parser.items("laser"))
    for key in laser_raw:
        if key not in LASER_UNITS:
            raise ConfigError(f"{source}: unknown key [laser] {key}")
    missing = sorted(set(LASER_UNITS) - set(laser_raw))
    if missing:
        raise ConfigError(f"{source}: missing [laser] keys: {', '.join(missing)}")
    laser = {key: _parse_entry("laser", key, raw, LASER_UNITS)
             for key, raw in laser_raw.items()}

    try:
        constants = LaserConstants(
            d=laser["d"], gamma=laser["gamma"], beta_sp=laser["beta_sp"],
            tau_p=laser["tau_p"], t_ref=laser["t_ref"],
            g0_ref=laser["g0_ref"], n0_ref=laser["n0_ref"],
            tau_n_ref=laser["tau_n_ref"], t0=laser["t0"], t0a=laser["t0a"])
    except ValueError as exc:
        raise ConfigError(f"{source}: [laser] {exc}") from None
    if laser["j_dc"] < 0 or laser["j_ac"] <= 0:
        raise ConfigError(f"{source}: drive current densities out of range")

    if parser.has_section("drive"):
        drive_raw = dict(parser.items("drive"))
        for key in drive_raw:
            if key not in DRIVE_UNITS:
                raise ConfigError(f"{source}: unknown key [drive] {key}")
        missing = sorted(set(DRIVE_UNITS) - set(drive_raw))
        if missing:
            raise ConfigError(
                f"{source}: missing [drive] keys: {', '.join(missing)}")
        drive = {key: _parse_entry("drive", key, raw, DRIVE_UNITS)
                 for key, raw in drive_raw.items()}
    else:
        # a profile without [drive] pulses both states at the table amplitude
        drive = {"j_ac_signal": laser["j_ac"], "j_ac_decoy": laser["j_ac"],
                 "duration": 100e-12}
    if drive["duration"] <= 0:
        raise ConfigError(f"{source}: [drive] duration must be positive")
    if drive["j_ac_signal"] <= 0 or drive["j_ac_decoy"] <= 0:
        raise ConfigError(f"{source}: [drive] amplitudes must be positive")

    if parser.has_section("attack"):
        attack_raw = dict(parser.items("attack"))
        for key in attack_raw:
            if key not in ATTACK_KEYS:
                raise ConfigError(f"{source}: unknown key [attack] {key}")
        missing = sorted(set(ATTACK_KEYS) - set(attack_raw))
        if missing:
            raise ConfigError(
                f"{source}: missing [attack] keys: {', '.join(missing)}")
        values = {}
        for key, raw in attack_raw.items():
            unit = "dB/km" if key == "delta_db_per_km" else "-"
            values[key] = _parse_bare("attack", key, raw, unit)
        try:
            scenario = AttackScenario(**values)
        except ValueError as exc:
            raise ConfigError(f"{source}: [attack] {exc}") from None
    else:
        scenario = default_profile().attack

    return Profile(
        constants=constants,
        j_dc=laser["j_dc"],
        j_ac=laser["j_ac"],
        j_ac_signal=drive["j_ac_signal"],
        j_ac_decoy=drive["j_ac_decoy"],
        pulse_duration=drive["duration"],
        attack=scenario,
    )


def load_profile(path=None):
    """Load a profile file, or the embedded default when path is None."""
    if path is None:
        return default_profile()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read profile {path!r}: {exc}") from None
    return parse_profile(text, source=str(path))


_DEFAULT = None


def default_profile():
    """The embedded default profile (parsed once and cached)."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = parse_profile(DEFAULT_PROFILE)
    return _DEFAULT


def dump_profile(profile):
    """Render a Profile back to profile text that re-parses identically."""
    laser_si = {
        "g0_ref": profile.constants.g0_ref,
        "n0_ref": profile.constants.n0_ref,
        "tau_n_ref": profile.constants.tau_n_ref,
        "tau_p": profile.constants.tau_p,
        "beta_sp": profile.constants.beta_sp,
        "d": profile.constants.d,
        "gamma": profile.constants.gamma,
        "j_ac": profile.j_ac,
        "j_dc": profile.j_dc,
        "t0": profile.constants.t0,
        "t0a": profile.constants.t0a,
        "t_ref": profile.constants.t_ref,
    }
    drive_si = {
        "j_ac_signal": profile.j_ac_signal,
        "j_ac_decoy": profile.j_ac_decoy,
        "duration": profile.pulse_duration,
    }
    out = io.StringIO()
    out.write("[laser]\n")
    for key, si_value in laser_si.items():
        unit, factor = LASER_UNITS[key]
        out.write(f"{key} = {si_value / factor!r} {unit}\n")
    out.write("\n[drive]\n")
    for key, si_value in drive_si.items():
        unit, factor = DRIVE_UNITS[key]
        out.write(f"{key} = {si_value / factor!r} {unit}\n")
    out.write("\n[attack]\n")
    sc = profile.attack
    for key in ATTACK_KEYS:
        value = getattr(sc, key)
        suffix = " dB/km" if key == "delta_db_per_km" else ""
        out.write(f"{key} = {value!r}{suffix}\n")
    return out.getvalue()
