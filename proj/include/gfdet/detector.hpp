// Neyman-Pearson user-detection analysis: conditional statistic model,
// threshold solver, false-alarm evaluation, and scheduling-size rules.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gfdet::detector {

// Tail model for the 2M-DoF statistic: central-limit Gaussian or the exact
// chi-square law.
enum class TailModel { gaussian, exact_chi_square };

// Cross-root interference gain: `paper_unit` uses unit gain per interferer;
// `true_zc` uses the physical gain L of unit-magnitude Zadoff-Chu pilots.
enum class CrossCorrModel { paper_unit, true_zc };

std::string to_string(TailModel m);
std::string to_string(CrossCorrModel m);
TailModel tail_model_from_string(const std::string& s);
CrossCorrModel crosscorr_model_from_string(const std::string& s);

// Frame-level context, recorded for reference only: no computation here
// depends on these (the pilot length L is an independent input).
inline constexpr double kSubframeDurationMs = 1.0;
inline constexpr double kSubbandBandwidthKHz = 125.0;
inline constexpr int kTransmissionBlockSymbols = 100;

struct SystemConfig {
    int antennas_M = 0;
    int pilot_length_L = 0;
    int user_count_K = 0;
    double arrival_rate_PA = 0.0;
    double target_detection_PD = 0.0;
    double outage_PO = 0.0;
    double pilot_snr_db = 15.0;
    // Per-symbol noise variance; defaults to L, which makes the despread
    // noise variance L^2 per antenna and the despread pilot SNR equal
    // pilot_snr_db.
    std::optional<double> noise_per_symbol_variance;
    TailModel tail_model = TailModel::gaussian;
    CrossCorrModel crosscorr_model = CrossCorrModel::paper_unit;

    double noise_variance() const;  // resolves the default
    double pilot_power() const;     // common received pilot power
    double crosscorr_gain() const;  // 1 or L
    int root_count() const;         // ceil(K/L)
    // Smallest root-group size floor(K/ceil(K/L)): the probe user with the
    // most cross-root interferers (worst case, the default perspective).
    int default_probe_group_size() const;
    void validate() const;
};

struct StatisticModel {
    int dof = 0;                   // 2M
    double pilot_power = 0.0;      // common received pilot power
    double pilot_length = 0.0;     // L
    double crosscorr_gain = 0.0;   // c: 1 (paper_unit) or L (true_zc)
    double despread_noise = 0.0;   // per-antenna variance of projected noise
    std::vector<double> mixture;   // P(J = q), q = 0..K-K_r
    TailModel tail_model = TailModel::gaussian;

    double var_active(int q) const {
        return 0.5 * (pilot_length * pilot_power + crosscorr_gain * q * pilot_power +
                      despread_noise);
    }
    double var_idle(int q) const {
        return 0.5 * (crosscorr_gain * q * pilot_power + despread_noise);
    }
    double mixture_weight_sum() const;
};

// Conditional scale mixture for a probe user whose root group has
// `probe_user_root_group_size` members: J ~ B(K - K_r, P_A) interferers.
StatisticModel build_statistic_model(const SystemConfig& config,
                                     int probe_user_root_group_size);

// P(Z <= omega | active): binomial mixture of lower tails. Strictly
// increasing in omega.
double miss_probability(double omega, const StatisticModel& model);

// P(Z > omega | idle): binomial mixture of upper tails. Strictly
// decreasing in omega.
double false_alarm_probability(double omega, const StatisticModel& model);

struct ThresholdResult {
    double omega = 0.0;
    double achieved_miss = 0.0;
    double analytic_pfa = 0.0;
    SystemConfig config_echo;
};

// Solves miss_probability(omega) = 1 - P_D by bisection: the largest
// threshold still meeting the detection-probability constraint.
ThresholdResult solve_threshold(const SystemConfig& config, int probe_user_root_group_size);
ThresholdResult solve_threshold(const SystemConfig& config);

// Largest K with P(B(K, P_A) >= M) <= P_O; 0 if even K = 1 violates the
// outage constraint (warning case, not an error).
int max_scheduling_size(int antennas_M, double arrival_rate_PA, double outage_PO);

// Smallest prime L with L^2 - L >= K_max.
int min_pilot_length(int k_max);

}  // namespace gfdet::detector
