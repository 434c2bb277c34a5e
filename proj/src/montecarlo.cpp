#include "gfdet/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace gfdet::montecarlo {

namespace {

constexpr std::uint64_t kPdStreamTag = 1;
constexpr std::uint64_t kPfaStreamTag = 2;

// Contiguous partition of [0, n) across workers; per-worker integer tallies
// keep the combined counts independent of scheduling.
template <typename TrialFn>
long long tally_detections(long long n_trials, int worker_threads, const TrialFn& trial) {
    int workers = worker_threads > 0
                      ? worker_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<long long>(workers) > n_trials) workers = static_cast<int>(n_trials);
    std::vector<long long> counts(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long long chunk = n_trials / workers;
    const long long rem = n_trials % workers;
    long long begin = 0;
    for (int w = 0; w < workers; ++w) {
        const long long end = begin + chunk + (w < rem ? 1 : 0);
        pool.emplace_back([&trial, &counts, w, begin, end] {
            long long hits = 0;
            for (long long t = begin; t < end; ++t) hits += trial(t) ? 1 : 0;
            counts[w] = hits;
        });
        begin = end;
    }
    for (auto& th : pool) th.join();
    long long total = 0;
    for (long long c : counts) total += c;
    return total;
}

}  // namespace

std::string to_string(TrialMode m) {
    return m == TrialMode::model_faithful ? "model_faithful" : "waveform";
}

TrialMode trial_mode_from_string(const std::string& s) {
    if (s == "model" || s == "model_faithful") return TrialMode::model_faithful;
    if (s == "waveform") return TrialMode::waveform;
    throw std::invalid_argument("mode must be 'model_faithful' or 'waveform', got '" + s + "'");
}

void TrialPlan::validate() const {
    config.validate();
    if (trials < 1) throw std::invalid_argument("TrialPlan: trials must be >= 1");
    if (probe_user_index < 0 || probe_user_index > config.user_count_K) {
        throw std::invalid_argument("TrialPlan: probe_user_index must be in [1, K] (0 = auto)");
    }
}

WilsonInterval wilson_interval(long long successes, long long n) {
    if (n < 1) throw std::invalid_argument("wilson_interval: n must be >= 1");
    const double z = 1.959963984540054;  // 95%
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    WilsonInterval ci;
    ci.low = successes == 0 ? 0.0 : std::max(0.0, std::min(center - half, phat));
    ci.high = successes == n ? 1.0 : std::min(1.0, std::max(center + half, phat));
    return ci;
}

double draw_conditional_statistic(rng::TrialRng& stream, const detector::StatisticModel& model,
                                  int q, bool active) {
    if (q < 0 || q >= static_cast<int>(model.mixture.size())) {
        throw std::invalid_argument("draw_conditional_statistic: q outside the mixture support");
    }
    const double scale = active ? model.var_active(q) : model.var_idle(q);
    if (!(scale > 0.0)) {
        throw std::invalid_argument("draw_conditional_statistic: degenerate variance scale");
    }
    return scale * stream.chi_square_even(model.dof);
}

double draw_statistic_model_faithful(rng::TrialRng& stream,
                                     const detector::StatisticModel& model, bool active) {
    const double u = stream.uniform();
    double cum = 0.0;
    int q = static_cast<int>(model.mixture.size()) - 1;
    for (int i = 0; i < static_cast<int>(model.mixture.size()); ++i) {
        cum += model.mixture[i];
        if (u <= cum) {
            q = i;
            break;
        }
    }
    return draw_conditional_statistic(stream, model, q, active);
}

ComplexMatrix synthesize_received_pilot(rng::TrialRng& stream,
                                        const detector::SystemConfig& config,
                                        const pilot::PilotAssignment& assignment,
                                        const std::vector<std::uint8_t>& activations,
                                        std::optional<double> noise_variance_override) {
    config.validate();
    if (static_cast<int>(activations.size()) != assignment.user_count_K) {
        throw std::invalid_argument("synthesize_received_pilot: activations size != K");
    }
    if (assignment.user_count_K != config.user_count_K) {
        throw std::invalid_argument("synthesize_received_pilot: assignment does not match config");
    }
    const int M = config.antennas_M;
    const int L = config.pilot_length_L;
    const double amp = std::sqrt(config.pilot_power());
    ComplexMatrix received(M, L);
    for (int j = 0; j < assignment.user_count_K; ++j) {
        if (!activations[j]) continue;
        const pilot::CVec psi = pilot::generate_zc(assignment.pilots[j]);
        for (int m = 0; m < M; ++m) {
            const std::complex<double> h = stream.complex_normal();
            for (int l = 0; l < L; ++l) {
                received.at(m, l) += amp * h * std::conj(psi[l]);
            }
        }
    }
    const double noise_var = noise_variance_override.value_or(config.noise_variance());
    if (noise_var < 0.0) {
        throw std::invalid_argument("synthesize_received_pilot: noise variance must be >= 0");
    }
    if (noise_var > 0.0) {
        const double noise_amp = std::sqrt(noise_var);
        for (auto& entry : received.data) entry += noise_amp * stream.complex_normal();
    }
    return received;
}

std::vector<double> sufficient_statistics(const ComplexMatrix& received,
                                          const pilot::PilotAssignment& assignment) {
    if (assignment.user_count_K < 1 || assignment.pilots.empty()) {
        throw std::invalid_argument("sufficient_statistics: empty assignment");
    }
    if (received.cols != assignment.pilots.front().length_L) {
        throw std::invalid_argument("sufficient_statistics: received cols != pilot length");
    }
    std::vector<double> z(assignment.user_count_K, 0.0);
    for (int j = 0; j < assignment.user_count_K; ++j) {
        const pilot::CVec psi = pilot::generate_zc(assignment.pilots[j]);
        double acc = 0.0;
        for (int m = 0; m < received.rows; ++m) {
            std::complex<double> dot{0.0, 0.0};
            for (int l = 0; l < received.cols; ++l) dot += received.at(m, l) * psi[l];
            acc += std::norm(dot);
        }
        z[j] = acc;
    }
    return z;
}

TrialReport run_trials(const TrialPlan& plan, double omega, int worker_threads) {
    plan.validate();
    if (!(omega >= 0.0)) throw std::domain_error("run_trials: omega must be >= 0");
    const detector::SystemConfig& config = plan.config;
    const int K = config.user_count_K;
    const pilot::PilotAssignment assignment = pilot::assign_pilots(K, config.pilot_length_L);
    // Default probe: first user of the last root, the smallest root group
    // (most cross-root interferers).
    const int probe = plan.probe_user_index > 0 ? plan.probe_user_index
                                                : assignment.root_count();
    const int probe_root = assignment.pilots[probe - 1].root_r;
    const int probe_group = assignment.root_group_sizes.at(probe_root);
    const detector::StatisticModel model = detector::build_statistic_model(config, probe_group);
    const double arrival = config.arrival_rate_PA;

    // Cross-root flags in user order; model-faithful trials count J over them.
    std::vector<std::uint8_t> cross_root(K, 0);
    for (int j = 0; j < K; ++j) {
        cross_root[j] = assignment.pilots[j].root_r != probe_root ? 1 : 0;
    }

    const auto model_trial = [&](std::uint64_t tag, bool probe_active) {
        return [&, tag, probe_active](long long t) {
            rng::TrialRng stream(plan.seed, static_cast<std::uint64_t>(t), tag);
            int interferers = 0;
            for (int j = 0; j < K; ++j) {
                if (j == probe - 1) continue;
                const bool active = stream.bernoulli(arrival);
                if (active && cross_root[j]) ++interferers;
            }
            const double z = draw_conditional_statistic(stream, model, interferers, probe_active);
            return z > omega;
        };
    };

    // Waveform trials work on the projected received vector y = Y psi_probe:
    // active users contribute their true pilot correlation times a fresh
    // Rayleigh channel, and the projected noise is CN(0, noise * ||psi||^2)
    // per antenna. Distribution-identical to synthesizing the full block and
    // correlating (see the equivalence test).
    const int M = config.antennas_M;
    const double amp = std::sqrt(config.pilot_power());
    std::vector<std::complex<double>> probe_corr(K);
    double probe_norm_sq = 0.0;
    {
        const pilot::CVec psi_probe = pilot::generate_zc(assignment.pilots[probe - 1]);
        for (int j = 0; j < K; ++j) {
            probe_corr[j] =
                pilot::cross_correlation(pilot::generate_zc(assignment.pilots[j]), psi_probe);
        }
        probe_norm_sq = std::real(pilot::cross_correlation(psi_probe, psi_probe));
    }
    const double proj_noise_amp = std::sqrt(config.noise_variance() * probe_norm_sq);

    const auto waveform_trial = [&](std::uint64_t tag, bool probe_active) {
        return [&, tag, probe_active](long long t) {
            rng::TrialRng stream(plan.seed, static_cast<std::uint64_t>(t), tag);
            std::vector<std::complex<double>> y(M, {0.0, 0.0});
            for (int j = 0; j < K; ++j) {
                const bool active =
                    (j == probe - 1) ? probe_active : stream.bernoulli(arrival);
                if (!active) continue;
                const std::complex<double> gain = amp * probe_corr[j];
                for (int m = 0; m < M; ++m) y[m] += gain * stream.complex_normal();
            }
            double z = 0.0;
            for (int m = 0; m < M; ++m) {
                const std::complex<double> noisy = y[m] + proj_noise_amp * stream.complex_normal();
                z += std::norm(noisy);
            }
            return z > omega;
        };
    };

    const long long pd_trials = (plan.trials + 1) / 2;
    const long long pfa_trials = plan.trials - pd_trials;

    TrialReport report;
    report.pd_trials = pd_trials;
    report.pfa_trials = pfa_trials;
    if (plan.mode == TrialMode::model_faithful) {
        report.pd_detections =
            tally_detections(pd_trials, worker_threads, model_trial(kPdStreamTag, true));
        report.pfa_detections =
            pfa_trials > 0
                ? tally_detections(pfa_trials, worker_threads, model_trial(kPfaStreamTag, false))
                : 0;
    } else {
        report.pd_detections =
            tally_detections(pd_trials, worker_threads, waveform_trial(kPdStreamTag, true));
        report.pfa_detections =
            pfa_trials > 0
                ? tally_detections(pfa_trials, worker_threads, waveform_trial(kPfaStreamTag, false))
                : 0;
    }
    report.empirical_pd = static_cast<double>(report.pd_detections) / pd_trials;
    report.wilson_ci_pd = wilson_interval(report.pd_detections, pd_trials);
    if (pfa_trials > 0) {
        report.empirical_pfa = static_cast<double>(report.pfa_detections) / pfa_trials;
        report.wilson_ci_pfa = wilson_interval(report.pfa_detections, pfa_trials);
    }
    report.seed_echo = plan.seed;
    report.mode_echo = plan.mode;
    report.rng_version = rng::kRngVersion;
    return report;
}

}  // namespace gfdet::montecarlo
