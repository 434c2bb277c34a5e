#include "gfdet/detector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gfdet/pilot.hpp"
#include "gfdet/probstat.hpp"

namespace gfdet::detector {

namespace {

// Mixture components below this weight cannot move a probability by more
// than (K+1)*1e-18 and are skipped in the tail sums.
constexpr double kWeightCutoff = 1e-18;

double lower_tail(double x, int dof, TailModel tail) {
    if (tail == TailModel::gaussian) {
        return probstat::normal_cdf((x - dof) / std::sqrt(2.0 * dof));
    }
    return probstat::chi_square_cdf(dof, x);
}

double upper_tail(double x, int dof, TailModel tail) {
    if (tail == TailModel::gaussian) {
        return probstat::q_function((x - dof) / std::sqrt(2.0 * dof));
    }
    return probstat::chi_square_sf(dof, x);
}

}  // namespace

std::string to_string(TailModel m) {
    return m == TailModel::gaussian ? "gaussian" : "exact_chi_square";
}

std::string to_string(CrossCorrModel m) {
    return m == CrossCorrModel::paper_unit ? "paper_unit" : "true_zc";
}

TailModel tail_model_from_string(const std::string& s) {
    if (s == "gaussian") return TailModel::gaussian;
    if (s == "exact" || s == "exact_chi_square") return TailModel::exact_chi_square;
    throw std::invalid_argument("tail_model must be 'gaussian' or 'exact_chi_square', got '" +
                                s + "'");
}

CrossCorrModel crosscorr_model_from_string(const std::string& s) {
    if (s == "paper" || s == "paper_unit") return CrossCorrModel::paper_unit;
    if (s == "zc" || s == "true_zc") return CrossCorrModel::true_zc;
    throw std::invalid_argument("crosscorr_model must be 'paper_unit' or 'true_zc', got '" +
                                s + "'");
}

double SystemConfig::noise_variance() const {
    return noise_per_symbol_variance.value_or(static_cast<double>(pilot_length_L));
}

double SystemConfig::pilot_power() const {
    return std::pow(10.0, pilot_snr_db / 10.0) * noise_variance();
}

double SystemConfig::crosscorr_gain() const {
    return crosscorr_model == CrossCorrModel::paper_unit
               ? 1.0
               : static_cast<double>(pilot_length_L);
}

int SystemConfig::root_count() const {
    return (user_count_K + pilot_length_L - 1) / pilot_length_L;
}

int SystemConfig::default_probe_group_size() const {
    return user_count_K / root_count();
}

void SystemConfig::validate() const {
    if (antennas_M < 1) throw std::invalid_argument("antennas_M must be >= 1");
    if (!pilot::is_prime(pilot_length_L)) {
        throw std::invalid_argument("pilot_length_L must be prime, got " +
                                    std::to_string(pilot_length_L));
    }
    if (user_count_K < 1) throw std::invalid_argument("user_count_K must be >= 1");
    const long long pool = static_cast<long long>(pilot_length_L) * pilot_length_L -
                           pilot_length_L;
    if (user_count_K > pool) {
        throw std::invalid_argument("user_count_K exceeds L^2-L = " + std::to_string(pool));
    }
    if (!(arrival_rate_PA >= 0.0 && arrival_rate_PA <= 1.0)) {
        throw std::invalid_argument("arrival_rate_PA must be in [0,1]");
    }
    if (!(target_detection_PD > 0.0 && target_detection_PD < 1.0)) {
        throw std::invalid_argument("target_detection_PD must be in (0,1)");
    }
    if (!(outage_PO > 0.0 && outage_PO < 1.0)) {
        throw std::invalid_argument("outage_PO must be in (0,1)");
    }
    if (!std::isfinite(pilot_snr_db)) throw std::invalid_argument("pilot_snr_db must be finite");
    if (noise_per_symbol_variance && !(*noise_per_symbol_variance > 0.0)) {
        throw std::invalid_argument("noise_per_symbol_variance must be positive");
    }
}

double StatisticModel::mixture_weight_sum() const {
    double sum = 0.0, comp = 0.0;
    for (double w : mixture) {
        const double t = sum + w;
        comp += (sum >= w) ? (sum - t) + w : (w - t) + sum;
        sum = t;
    }
    return sum + comp;
}

StatisticModel build_statistic_model(const SystemConfig& config,
                                     int probe_user_root_group_size) {
    config.validate();
    if (probe_user_root_group_size < 1 || probe_user_root_group_size > config.user_count_K) {
        throw std::invalid_argument("probe_user_root_group_size must be in [1, K]");
    }
    StatisticModel model;
    model.dof = 2 * config.antennas_M;
    model.pilot_power = config.pilot_power();
    model.pilot_length = config.pilot_length_L;
    model.crosscorr_gain = config.crosscorr_gain();
    model.despread_noise = config.noise_variance() * config.pilot_length_L;
    model.tail_model = config.tail_model;
    const int n = config.user_count_K - probe_user_root_group_size;
    model.mixture.resize(n + 1);
    probstat::BinomialLaw law{n, config.arrival_rate_PA};
    for (int q = 0; q <= n; ++q) model.mixture[q] = probstat::binomial_pmf(law, q);
    return model;
}

double miss_probability(double omega, const StatisticModel& model) {
    if (!(omega >= 0.0)) throw std::domain_error("miss_probability: omega must be >= 0");
    double sum = 0.0, comp = 0.0;
    for (int q = 0; q < static_cast<int>(model.mixture.size()); ++q) {
        const double w = model.mixture[q];
        if (w < kWeightCutoff) continue;
        const double term = w * lower_tail(omega / model.var_active(q), model.dof,
                                           model.tail_model);
        const double t = sum + term;
        comp += (sum >= term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double false_alarm_probability(double omega, const StatisticModel& model) {
    if (!(omega >= 0.0)) throw std::domain_error("false_alarm_probability: omega must be >= 0");
    double sum = 0.0, comp = 0.0;
    for (int q = 0; q < static_cast<int>(model.mixture.size()); ++q) {
        const double w = model.mixture[q];
        if (w < kWeightCutoff) continue;
        const double term = w * upper_tail(omega / model.var_idle(q), model.dof,
                                           model.tail_model);
        const double t = sum + term;
        comp += (sum >= term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

ThresholdResult solve_threshold(const SystemConfig& config, int probe_user_root_group_size) {
    const StatisticModel model = build_statistic_model(config, probe_user_root_group_size);
    const double target = 1.0 - config.target_detection_PD;
    const int q_max = static_cast<int>(model.mixture.size()) - 1;
    double lo = 0.0;
    double hi = model.var_active(q_max) *
                (model.dof + 20.0 * std::sqrt(static_cast<double>(config.antennas_M)));
    if (!(miss_probability(hi, model) > target)) {
        throw std::runtime_error("solve_threshold: bracket failure");
    }
    // Bisection keeps miss(lo) <= target < miss(hi); run to interval
    // exhaustion so the returned (lower) endpoint sits on the boundary.
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (miss_probability(mid, model) <= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ThresholdResult result;
    result.omega = lo;
    result.achieved_miss = miss_probability(lo, model);
    result.analytic_pfa = false_alarm_probability(lo, model);
    result.config_echo = config;
    return result;
}

ThresholdResult solve_threshold(const SystemConfig& config) {
    config.validate();
    return solve_threshold(config, config.default_probe_group_size());
}

int max_scheduling_size(int antennas_M, double arrival_rate_PA, double outage_PO) {
    if (antennas_M < 1) throw std::invalid_argument("max_scheduling_size: M must be >= 1");
    if (!(arrival_rate_PA > 0.0 && arrival_rate_PA <= 1.0)) {
        throw std::invalid_argument("max_scheduling_size: P_A must be in (0,1]");
    }
    if (!(outage_PO > 0.0 && outage_PO < 1.0)) {
        throw std::invalid_argument("max_scheduling_size: P_O must be in (0,1)");
    }
    const auto overload_tail = [&](int users) {
        return probstat::binomial_tail({users, arrival_rate_PA}, antennas_M);
    };
    if (overload_tail(1) > outage_PO) return 0;  // unsatisfiable even at K=1
    // The tail is non-decreasing in K: exponential bracket, then bisect.
    int lo = 1, hi = 2;
    while (overload_tail(hi) <= outage_PO) {
        lo = hi;
        if (hi > (1 << 28)) throw std::runtime_error("max_scheduling_size: bracket overflow");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (overload_tail(mid) <= outage_PO) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

int min_pilot_length(int k_max) {
    if (k_max < 1) throw std::invalid_argument("min_pilot_length: K_max must be >= 1");
    for (int L = 2;; ++L) {
        if (!pilot::is_prime(L)) continue;
        if (static_cast<long long>(L) * L - L >= k_max) return L;
    }
}

}  // namespace gfdet::detector
