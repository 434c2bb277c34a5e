// Empirical detection/false-alarm estimation. Two modes: model_faithful
// draws the sufficient statistic from its conditional scale mixture;
// waveform realizes per-user Rayleigh channels and projected receiver
// noise with real Zadoff-Chu pilot correlations.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfdet/detector.hpp"
#include "gfdet/pilot.hpp"
#include "gfdet/rng.hpp"

namespace gfdet::montecarlo {

enum class TrialMode { model_faithful, waveform };

std::string to_string(TrialMode m);
TrialMode trial_mode_from_string(const std::string& s);

struct TrialPlan {
    detector::SystemConfig config;
    TrialMode mode = TrialMode::model_faithful;
    long long trials = 0;          // total; split evenly across the two streams
    std::uint64_t seed = 0;
    int probe_user_index = 0;      // 1-based; 0 selects the smallest root group
    void validate() const;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// 95% Wilson score interval for `successes` out of `n`.
WilsonInterval wilson_interval(long long successes, long long n);

struct TrialReport {
    double empirical_pd = 0.0;
    double empirical_pfa = 0.0;
    long long pd_trials = 0;
    long long pfa_trials = 0;
    long long pd_detections = 0;
    long long pfa_detections = 0;
    WilsonInterval wilson_ci_pd;
    WilsonInterval wilson_ci_pfa;
    std::uint64_t seed_echo = 0;
    TrialMode mode_echo = TrialMode::model_faithful;
    std::string rng_version;
};

// Scaled chi-square draw conditioned on the interferer count q.
double draw_conditional_statistic(rng::TrialRng& stream, const detector::StatisticModel& model,
                                  int q, bool active);

// Draws the interferer count from the model's binomial mixture, then the
// conditional statistic.
double draw_statistic_model_faithful(rng::TrialRng& stream,
                                     const detector::StatisticModel& model, bool active);

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> data;  // row-major

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
    std::complex<double>& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
};

// One received pilot block: sum of active users' rank-one channel/pilot
// contributions plus white complex Gaussian noise. `activations` holds one
// flag per user. The noise override replaces the config's per-symbol noise
// variance (0 disables noise entirely).
ComplexMatrix synthesize_received_pilot(rng::TrialRng& stream,
                                        const detector::SystemConfig& config,
                                        const pilot::PilotAssignment& assignment,
                                        const std::vector<std::uint8_t>& activations,
                                        std::optional<double> noise_variance_override = {});

// Z_j = ||Y psi_j||^2 for every user j.
std::vector<double> sufficient_statistics(const ComplexMatrix& received,
                                          const pilot::PilotAssignment& assignment);

// Conditioned trial streams: the probe user is forced active in the P_D
// stream and idle in the P_FA stream; everyone else activates i.i.d.
// Bernoulli(P_A). Detection declares active when Z_probe > omega. The
// report is bit-identical for any worker count.
TrialReport run_trials(const TrialPlan& plan, double omega, int worker_threads = 0);

}  // namespace gfdet::montecarlo
