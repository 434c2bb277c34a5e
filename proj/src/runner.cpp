#include "gfdet/runner.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gfdet/pilot.hpp"
#include "gfdet/rng.hpp"

namespace gfdet::runner {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config parse failure: not valid JSON");
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    return doc;
}

void reject_unknown_keys(const json& doc, const std::vector<std::string>& allowed,
                         const std::string& scope) {
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool known = false;
        for (const auto& a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown key '" + key + "' in " + scope);
    }
}

double require_number(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError("missing required key '" + key + "'");
    if (!doc[key].is_number()) throw ConfigError("key '" + key + "' must be a number");
    return doc[key].get<double>();
}

int require_int(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError("missing required key '" + key + "'");
    if (!doc[key].is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
    return doc[key].get<int>();
}

detector::SystemConfig system_config_from_json(const json& doc) {
    reject_unknown_keys(doc,
                        {"antennas_M", "pilot_length_L", "user_count_K", "arrival_rate_PA",
                         "target_detection_PD", "outage_PO", "pilot_snr_db",
                         "noise_per_symbol_variance", "tail_model", "crosscorr_model"},
                        "SystemConfig");
    detector::SystemConfig config;
    config.antennas_M = require_int(doc, "antennas_M");
    config.pilot_length_L = require_int(doc, "pilot_length_L");
    config.user_count_K = require_int(doc, "user_count_K");
    config.arrival_rate_PA = require_number(doc, "arrival_rate_PA");
    config.target_detection_PD = require_number(doc, "target_detection_PD");
    config.outage_PO = require_number(doc, "outage_PO");
    if (doc.contains("pilot_snr_db")) config.pilot_snr_db = doc["pilot_snr_db"].get<double>();
    if (doc.contains("noise_per_symbol_variance")) {
        config.noise_per_symbol_variance = doc["noise_per_symbol_variance"].get<double>();
    }
    try {
        if (doc.contains("tail_model")) {
            config.tail_model = detector::tail_model_from_string(doc["tail_model"].get<std::string>());
        }
        if (doc.contains("crosscorr_model")) {
            config.crosscorr_model =
                detector::crosscorr_model_from_string(doc["crosscorr_model"].get<std::string>());
        }
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

SweepSpec sweep_spec_from_json(const json& doc) {
    reject_unknown_keys(
        doc, {"axis", "grid", "fixed", "pd_targets", "couple_kmax", "mc_trials", "seed"},
        "SweepSpec");
    SweepSpec spec;
    if (!doc.contains("axis") || !doc["axis"].is_string()) {
        throw ConfigError("missing or non-string key 'axis'");
    }
    try {
        spec.axis = sweep_axis_from_string(doc["axis"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!doc.contains("grid") || !doc["grid"].is_array()) {
        throw ConfigError("missing or non-array key 'grid'");
    }
    for (const auto& v : doc["grid"]) {
        if (!v.is_number()) throw ConfigError("grid values must be numbers");
        spec.grid.push_back(v.get<double>());
    }
    if (!doc.contains("fixed") || !doc["fixed"].is_object()) {
        throw ConfigError("missing or non-object key 'fixed'");
    }
    spec.fixed = system_config_from_json(doc["fixed"]);
    if (doc.contains("pd_targets")) {
        if (!doc["pd_targets"].is_array()) throw ConfigError("pd_targets must be an array");
        for (const auto& v : doc["pd_targets"]) spec.pd_targets.push_back(v.get<double>());
    } else {
        spec.pd_targets.push_back(spec.fixed.target_detection_PD);
    }
    if (doc.contains("couple_kmax")) {
        if (!doc["couple_kmax"].is_boolean()) throw ConfigError("couple_kmax must be a boolean");
        spec.couple_kmax = doc["couple_kmax"].get<bool>();
    }
    if (doc.contains("mc_trials")) spec.mc_trials = doc["mc_trials"].get<long long>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

}  // namespace

std::string to_string(SweepAxis axis) {
    return axis == SweepAxis::antennas_M ? "antennas_M" : "arrival_rate_PA";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "antennas_M") return SweepAxis::antennas_M;
    if (s == "arrival_rate_PA") return SweepAxis::arrival_rate_PA;
    throw std::invalid_argument("axis must be 'antennas_M' or 'arrival_rate_PA', got '" + s + "'");
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("SweepSpec: grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
        }
    }
    if (axis == SweepAxis::antennas_M) {
        for (double v : grid) {
            if (v < 1.0 || v != static_cast<double>(static_cast<int>(v))) {
                throw std::invalid_argument("SweepSpec: antennas_M grid values must be integers >= 1");
            }
        }
    } else {
        for (double v : grid) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("SweepSpec: arrival_rate_PA grid values must be in [0,1]");
            }
        }
    }
    if (pd_targets.empty()) throw std::invalid_argument("SweepSpec: pd_targets must be non-empty");
    for (double pd : pd_targets) {
        if (!(pd > 0.0 && pd < 1.0)) {
            throw std::invalid_argument("SweepSpec: pd_targets must lie in (0,1)");
        }
    }
    if (mc_trials < 0) throw std::invalid_argument("SweepSpec: mc_trials must be >= 0");
    fixed.validate();
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size() * spec.pd_targets.size());
    long long row_ordinal = 0;
    for (double axis_value : spec.grid) {
        detector::SystemConfig config = spec.fixed;
        if (spec.axis == SweepAxis::antennas_M) {
            config.antennas_M = static_cast<int>(axis_value);
        } else {
            config.arrival_rate_PA = axis_value;
        }
        const long long pool = static_cast<long long>(config.pilot_length_L) *
                                   config.pilot_length_L -
                               config.pilot_length_L;
        int kmax = 0;
        std::string status = "ok";
        if (spec.couple_kmax) {
            kmax = detector::max_scheduling_size(config.antennas_M, config.arrival_rate_PA,
                                                 config.outage_PO);
            if (kmax == 0) {
                status = "kmax_zero";
            } else if (kmax > pool) {
                // Pilot pool exhausted: cap and flag.
                config.user_count_K = static_cast<int>(pool);
                status = "k_capped";
            } else {
                config.user_count_K = kmax;
            }
        }
        for (double pd : spec.pd_targets) {
            SweepRow row;
            row.axis = to_string(spec.axis);
            row.antennas_M = config.antennas_M;
            row.pilot_length_L = config.pilot_length_L;
            row.arrival_rate_PA = config.arrival_rate_PA;
            row.target_detection_PD = pd;
            row.outage_PO = config.outage_PO;
            row.pilot_snr_db = config.pilot_snr_db;
            row.noise_per_symbol_variance = config.noise_variance();
            row.tail_model = detector::to_string(config.tail_model);
            row.crosscorr_model = detector::to_string(config.crosscorr_model);
            row.kmax = kmax;
            row.status = status;
            row.seed = spec.seed;
            const long long ordinal = row_ordinal++;
            if (status == "kmax_zero") {
                row.user_count_K = 0;
                rows.push_back(row);
                continue;
            }
            row.user_count_K = config.user_count_K;
            detector::SystemConfig point = config;
            point.target_detection_PD = pd;
            const detector::ThresholdResult solved = detector::solve_threshold(point);
            row.omega = solved.omega;
            row.miss = solved.achieved_miss;
            row.pfa_analytic = solved.analytic_pfa;
            if (spec.mc_trials > 0) {
                montecarlo::TrialPlan plan;
                plan.config = point;
                plan.mode = montecarlo::TrialMode::model_faithful;
                plan.trials = spec.mc_trials;
                plan.seed = rng::mix64(spec.seed ^ (0x9E3779B97F4A7C15ULL *
                                                    static_cast<std::uint64_t>(ordinal + 1)));
                const montecarlo::TrialReport report = montecarlo::run_trials(plan, solved.omega);
                row.mode = montecarlo::to_string(report.mode_echo);
                row.trials = plan.trials;
                row.seed = plan.seed;
                row.pd_mc = report.empirical_pd;
                row.pd_ci_low = report.wilson_ci_pd.low;
                row.pd_ci_high = report.wilson_ci_pd.high;
                row.pfa_mc = report.empirical_pfa;
                row.pfa_ci_low = report.wilson_ci_pfa.low;
                row.pfa_ci_high = report.wilson_ci_pfa.high;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

SweepSpec fig2_preset() {
    SweepSpec spec;
    spec.axis = SweepAxis::antennas_M;
    spec.grid = {32, 64, 128, 256, 512};
    spec.fixed.antennas_M = 32;
    spec.fixed.pilot_length_L = 97;
    spec.fixed.user_count_K = 1;  // overwritten per grid point
    spec.fixed.arrival_rate_PA = 0.1;
    spec.fixed.target_detection_PD = 0.99;
    spec.fixed.outage_PO = 0.1;
    spec.pd_targets = {0.9, 0.99, 0.999};
    spec.couple_kmax = true;
    spec.seed = 1;
    return spec;
}

SweepSpec fig3_preset() {
    SweepSpec spec;
    spec.axis = SweepAxis::arrival_rate_PA;
    spec.grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    spec.fixed.antennas_M = 128;
    spec.fixed.pilot_length_L = 47;
    spec.fixed.user_count_K = 1;  // overwritten per grid point
    spec.fixed.arrival_rate_PA = 0.1;
    spec.fixed.target_detection_PD = 0.99;
    spec.fixed.outage_PO = 0.1;
    spec.pd_targets = {0.9, 0.99, 0.999};
    spec.couple_kmax = true;
    spec.seed = 1;
    return spec;
}

detector::SystemConfig system_config_from_json_text(const std::string& text) {
    return system_config_from_json(parse_json(text));
}

SweepSpec sweep_spec_from_json_text(const std::string& text) {
    return sweep_spec_from_json(parse_json(text));
}

std::variant<detector::SystemConfig, SweepSpec> load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const json doc = parse_json(buffer.str());
    if (doc.contains("axis")) return sweep_spec_from_json(doc);
    return system_config_from_json(doc);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_header() {
    return "axis,M,L,K,P_A,P_D,P_O,snr_db,noise_var,tail,xcorr,kmax,status,omega,miss,"
           "pfa_analytic,mode,trials,seed,pd_mc,pd_ci_low,pd_ci_high,pfa_mc,pfa_ci_low,"
           "pfa_ci_high";
}

namespace {
std::string opt_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}
}  // namespace

std::string to_csv_row(const SweepRow& row) {
    std::ostringstream out;
    out << row.axis << ',' << row.antennas_M << ',' << row.pilot_length_L << ','
        << row.user_count_K << ',' << format_double(row.arrival_rate_PA) << ','
        << format_double(row.target_detection_PD) << ',' << format_double(row.outage_PO) << ','
        << format_double(row.pilot_snr_db) << ','
        << format_double(row.noise_per_symbol_variance) << ',' << row.tail_model << ','
        << row.crosscorr_model << ',' << row.kmax << ',' << row.status << ','
        << opt_cell(row.omega) << ',' << opt_cell(row.miss) << ','
        << opt_cell(row.pfa_analytic) << ',' << row.mode << ',' << row.trials << ','
        << row.seed << ',' << opt_cell(row.pd_mc) << ',' << opt_cell(row.pd_ci_low) << ','
        << opt_cell(row.pd_ci_high) << ',' << opt_cell(row.pfa_mc) << ','
        << opt_cell(row.pfa_ci_low) << ',' << opt_cell(row.pfa_ci_high);
    return out.str();
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << csv_header() << '\n';
    for (const auto& row : rows) out << to_csv_row(row) << '\n';
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    emit_csv(rows, out);
    out.flush();
    if (!out) throw IoError("write failure: " + path);
}

}  // namespace gfdet::runner
