#!/usr/bin/env python3
"""Simulate one gain-switched pulse and print its observables.

Runs the rate equations at 25 C for the signal and decoy drive levels,
prints the thermal operating point and the extracted pulse metrics, and
saves the photon/carrier trajectories to CSV. If matplotlib is installed
a two-panel plot is saved as well.

Usage:
    python3 demos/single_pulse.py
"""

import gainswitch as gs

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

TEMP_C = 25.0
HORIZON = 2e-9


def describe(thermal):
    print(f"operating point at {thermal.temperature:.0f} C:")
    print(f"  n_th = {thermal.n_th:.4e} m^-3   n_dc = {thermal.n_dc:.4e} m^-3")
    print(f"  n0   = {thermal.n0:.4e} m^-3   tau_n = {thermal.tau_n * 1e9:.3f} ns")
    print(f"  j_th = {thermal.j_th * 1e-4:.1f} A/cm^2   "
          f"bias margin n_dc/n_th = {thermal.n_dc / thermal.n_th:.3f}")


def report(state, pm):
    t_re = f"{pm.t_re * 1e9:.3f} ns" if pm.recovered else "not reached"
    print(f"{state:>6}: t_on = {pm.t_on * 1e12:7.3f} ps   "
          f"t_peak = {pm.t_peak * 1e12:7.3f} ps   "
          f"S_max = {pm.s_max:.4e} m^-3   t_re = {t_re}")


def main():
    profile = gs.default_profile()
    results = {}
    for state in ("signal", "decoy"):
        thermal, traj, pm = gs.run_pulse_scenario(
            profile, TEMP_C, state, t_end=HORIZON)
        results[state] = (traj, pm)
        if state == "signal":
            describe(thermal)
        report(state, pm)
        fname = f"single_pulse_{state}.csv"
        with open(fname, "w") as fh:
            gs.write_trajectory_csv(traj, fh, decimate=10)
        print(f"        trajectory written to {fname}")

    thermal25 = gs.thermal_state(profile.constants, TEMP_C, profile.j_dc)
    estimate = gs.analytic_decay_time(thermal25)
    print(f"free-decay recovery estimate: {estimate * 1e9:.3f} ns "
          f"(true 1% settling takes several tau_n; extend t_end to see it)")

    if not HAVE_MPL:
        print("matplotlib not available, skipping plot")
        return

    fig, (ax_s, ax_n) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for state, (traj, pm) in results.items():
        t_ps = traj.times * 1e12
        ax_s.plot(t_ps, traj.s, label=state)
        ax_n.plot(t_ps, traj.n, label=state)
    thermal = results["signal"][0].thermal
    ax_n.axhline(thermal.n_th, color="k", ls=":", lw=0.8, label="n_th")
    ax_n.axhline(thermal.n_dc, color="gray", ls=":", lw=0.8, label="n_dc")
    ax_s.set_ylabel("photon density (m$^{-3}$)")
    ax_n.set_ylabel("carrier density (m$^{-3}$)")
    ax_n.set_xlabel("time (ps)")
    ax_s.set_xlim(0, 500)
    ax_s.legend()
    ax_n.legend(loc="lower right", fontsize=8)
    ax_s.set_title(f"gain-switched pulse at {TEMP_C:.0f} C")
    fig.tight_layout()
    fig.savefig("single_pulse.png", dpi=150)
    print("plot saved to single_pulse.png")


if __name__ == "__main__":
    main()
