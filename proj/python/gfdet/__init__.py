"""Grant-free uplink user-detection analysis toolkit.

Thin wrapper over the C++ core: Zadoff-Chu pilot generation, Neyman-Pearson
threshold solving, false-alarm evaluation, scheduling-size rules, and Monte
Carlo validation.
"""

from ._core import (  # noqa: F401
    RNG_VERSION,
    CrossCorrModel,
    PilotAssignment,
    PilotSpec,
    StatisticModel,
    SweepSpec,
    SystemConfig,
    TailModel,
    ThresholdResult,
    TrialMode,
    TrialPlan,
    TrialReport,
    WilsonInterval,
    assign_pilots,
    binomial_pmf,
    binomial_tail,
    build_statistic_model,
    chi_square_cdf,
    chi_square_sf,
    cross_correlation,
    false_alarm_probability,
    fig2_preset,
    fig3_preset,
    generate_zc,
    is_prime,
    max_scheduling_size,
    min_pilot_length,
    miss_probability,
    q_function,
    q_inverse,
    run_sweep_csv,
    run_trials,
    solve_threshold,
    sweep_spec_from_json_text,
    __version__,
)
