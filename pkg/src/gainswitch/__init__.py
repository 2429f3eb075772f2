"""Temperature-dependent gain-switched laser simulation and decoy-state
attack feasibility analysis."""

from .attack import (AttackScenario, AttackSolution, NoCrossingError,
                     channel_transmittance, count_rate_decoy_attacked,
                     count_rate_no_attack, count_rate_signal_attacked,
                     min_feasible_distance, scan_distance, solve_attack,
                     summarize_scan, yield_n)
from .dynamics import (DEFAULT_DT_PULSE, DEFAULT_DT_TRAIN, DivergenceError,
                       DriveWaveform, NoSteadyStateError, Trajectory,
                       derivatives, integrate, simulate_train,
                       steady_state_s, write_trajectory_csv)
from .metrics import (BelowThresholdPulseError, InvalidRegimeError,
                      PulseMetrics, StatePairMetrics, UndefinedRateError,
                      analytic_decay_time, compare_states,
                      energy_prediction_delta, extract_metrics,
                      max_repetition_rate, smax_prediction_delta,
                      write_metrics_csv)
from .oracle import (OracleReport, TruncationError,
                     decoy_attacked_gain_oracle, euler_reference_trajectory,
                     poisson_gain_oracle, run_verification_suite,
                     signal_attacked_gain_oracle)
from .profiles import (ConfigError, Profile, default_profile, dump_profile,
                       load_profile, parse_profile)
from .sweeps import (CycleRow, SweepRow, run_pulse_scenario, run_table_sweep,
                     run_train_scenario)
from .thermal import (ELEMENTARY_CHARGE, AboveThresholdBiasError,
                      LaserConstants, ThermalState, scale_parameters,
                      thermal_state, threshold_current_ratio)

__version__ = "0.1.0"

__all__ = [
    "AboveThresholdBiasError", "AttackScenario", "AttackSolution",
    "BelowThresholdPulseError", "ConfigError", "CycleRow",
    "DEFAULT_DT_PULSE", "DEFAULT_DT_TRAIN", "DivergenceError",
    "DriveWaveform", "ELEMENTARY_CHARGE", "InvalidRegimeError",
    "LaserConstants", "NoCrossingError", "NoSteadyStateError",
    "OracleReport", "Profile", "PulseMetrics", "StatePairMetrics",
    "SweepRow", "ThermalState", "Trajectory", "TruncationError",
    "UndefinedRateError", "analytic_decay_time", "channel_transmittance",
    "compare_states", "count_rate_decoy_attacked", "count_rate_no_attack",
    "count_rate_signal_attacked", "decoy_attacked_gain_oracle",
    "default_profile", "derivatives", "dump_profile",
    "energy_prediction_delta", "euler_reference_trajectory",
    "extract_metrics", "integrate", "load_profile", "max_repetition_rate",
    "min_feasible_distance", "parse_profile", "poisson_gain_oracle",
    "run_pulse_scenario", "run_table_sweep", "run_train_scenario",
    "run_verification_suite", "scale_parameters", "scan_distance",
    "signal_attacked_gain_oracle", "simulate_train", "smax_prediction_delta",
    "solve_attack", "steady_state_s", "summarize_scan", "thermal_state",
    "threshold_current_ratio", "write_metrics_csv", "write_trajectory_csv",
    "yield_n",
]
