// Sweep orchestration: parameter grids over the detector analytics with
// optional Monte Carlo validation, JSON configuration, and CSV output.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gfdet/detector.hpp"
#include "gfdet/montecarlo.hpp"

namespace gfdet::runner {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepAxis { antennas_M, arrival_rate_PA };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
    SweepAxis axis = SweepAxis::antennas_M;
    std::vector<double> grid;            // strictly increasing axis values
    detector::SystemConfig fixed;        // defaults for everything off-axis
    std::vector<double> pd_targets;      // one row per grid point per target
    bool couple_kmax = false;            // recompute K = K_max per grid point
    long long mc_trials = 0;             // 0 = analytic only
    std::uint64_t seed = 0;
    void validate() const;
};

struct SweepRow {
    std::string axis;
    int antennas_M = 0;
    int pilot_length_L = 0;
    int user_count_K = 0;
    double arrival_rate_PA = 0.0;
    double target_detection_PD = 0.0;
    double outage_PO = 0.0;
    double pilot_snr_db = 0.0;
    double noise_per_symbol_variance = 0.0;
    std::string tail_model;
    std::string crosscorr_model;
    int kmax = 0;
    std::string status;  // ok | kmax_zero | k_capped
    std::optional<double> omega;
    std::optional<double> miss;
    std::optional<double> pfa_analytic;
    std::string mode;  // empty when analytic only
    long long trials = 0;
    std::uint64_t seed = 0;
    std::optional<double> pd_mc, pd_ci_low, pd_ci_high;
    std::optional<double> pfa_mc, pfa_ci_low, pfa_ci_high;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Bundled sweep presets: antenna-size sweep (L = 97, P_A = 0.1) and
// arrival-rate sweep (M = 128, L = 47), three detection targets each.
SweepSpec fig2_preset();
SweepSpec fig3_preset();

// Flat JSON with the exact field names of SystemConfig, or a sweep document
// with an "axis" key. Unknown keys are hard errors.
std::variant<detector::SystemConfig, SweepSpec> load_config(const std::string& path);
detector::SystemConfig system_config_from_json_text(const std::string& text);
SweepSpec sweep_spec_from_json_text(const std::string& text);

// RFC-4180-style CSV: fixed column order, 17-significant-digit doubles,
// LF line endings. Byte-stable for identical rows.
std::string csv_header();
std::string to_csv_row(const SweepRow& row);
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

// 17-significant-digit formatting used for every CSV double.
std::string format_double(double v);

}  // namespace gfdet::runner
