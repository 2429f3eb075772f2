import time

import pytest

import gainswitch as gs
from gainswitch.metrics import REFERENCE_TEMPS
from gainswitch.sweeps import run_pulse_scenario, run_table_sweep, run_train_scenario

ACCEPTANCE_RESULTS = []


def record_criterion(number, title, ok, detail):
    ACCEPTANCE_RESULTS.append((number, title, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} {verdict}  {title}: {detail}")


@pytest.fixture(scope="session")
def profile():
    return gs.default_profile()


@pytest.fixture(scope="session")
def constants(profile):
    return profile.constants


@pytest.fixture(scope="session")
def table_sweep(profile):
    """Signal/decoy metrics at the 7 benchmark temperatures, with wall time."""
    t0 = time.perf_counter()
    rows = run_table_sweep(profile, REFERENCE_TEMPS)
    elapsed = time.perf_counter() - t0
    return rows, elapsed


@pytest.fixture(scope="session")
def recovery_sweep(profile):
    """Signal pulses on a horizon long enough to observe carrier recovery."""
    out = []
    for temp_c in REFERENCE_TEMPS:
        _, _, pm = run_pulse_scenario(profile, temp_c, "signal", t_end=10e-9)
        out.append((temp_c, pm))
    return out


@pytest.fixture(scope="session")
def trains(profile):
    """Three-pulse trains for the repetition-rate scenarios."""
    out = {}
    for freq, temp_c in ((800e6, 15.0), (800e6, 45.0), (500e6, 45.0)):
        _, _, cycles = run_train_scenario(profile, temp_c, freq, 3)
        out[(freq, temp_c)] = cycles
    return out


@pytest.fixture(scope="session")
def halving_runs(profile, constants):
    """25 C signal pulse metrics at the default step and at half the step."""
    _, _, coarse = run_pulse_scenario(profile, 25.0, "signal", t_end=8e-9)
    _, _, fine = run_pulse_scenario(profile, 25.0, "signal",
                                    dt=gs.DEFAULT_DT_PULSE / 2.0, t_end=8e-9)
    return coarse, fine


@pytest.fixture(scope="session")
def pulse25(profile):
    """Default 25 C signal pulse: (thermal, trajectory, metrics)."""
    return run_pulse_scenario(profile, 25.0, "signal")
