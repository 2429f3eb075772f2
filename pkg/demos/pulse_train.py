#!/usr/bin/env python3
"""Check pulse-to-pulse stability of periodic gain-switched trains.

Runs three-pulse signal trains at several (frequency, temperature)
corners, prints the per-cycle peak photon density and rising-edge carrier
density, and flags cycles that start with carriers more than 1 % above
the DC level. That flag is the signature of incomplete recovery: the next
pulse then grows from a hotter seed and the train is not stable.

Usage:
    python3 demos/pulse_train.py
"""

import gainswitch as gs

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    HAVE_MPL = True
except ImportError:
    HAVE_MPL = False

CASES = [
    (800e6, 15.0),
    (800e6, 45.0),
    (500e6, 45.0),
]
N_PULSES = 3


def main():
    profile = gs.default_profile()
    trajs = {}
    for freq, temp in CASES:
        thermal, traj, cycles = gs.run_train_scenario(
            profile, temp, freq, N_PULSES)
        trajs[(freq, temp)] = traj
        label = f"{freq / 1e6:.0f} MHz / {temp:.0f} C"
        flagged = sum(c.flagged for c in cycles)
        verdict = "STABLE" if flagged == 0 else f"{flagged} cycle(s) flagged"
        print(f"{label}: {verdict}")
        for c in cycles:
            mark = " <-- incomplete recovery" if c.flagged else ""
            print(f"  cycle {c.cycle}: S_max = {c.s_max:.4e} m^-3   "
                  f"n_start/n_dc = {c.n_initial / thermal.n_dc:.4f}{mark}")
        growth = cycles[1].s_max / cycles[0].s_max
        print(f"  second/first pulse amplitude ratio: {growth:.4f}\n")

    if not HAVE_MPL:
        print("matplotlib not available, skipping plot")
        return

    fig, axes = plt.subplots(len(CASES), 1, figsize=(8, 7), sharex=False)
    for ax, (freq, temp) in zip(axes, CASES):
        traj = trajs[(freq, temp)]
        ax.plot(traj.times * 1e9, traj.s, lw=0.8)
        ax.set_ylabel("S (m$^{-3}$)")
        ax.set_title(f"{freq / 1e6:.0f} MHz at {temp:.0f} C", fontsize=9)
    axes[-1].set_xlabel("time (ns)")
    fig.tight_layout()
    fig.savefig("pulse_train.png", dpi=150)
    print("plot saved to pulse_train.png")


if __name__ == "__main__":
    main()
