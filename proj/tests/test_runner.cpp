#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gfdet/runner.hpp"

using namespace gfdet;
using namespace gfdet::runner;

namespace {

const char* kMinimalConfig =
    R"({"antennas_M":128,"pilot_length_L":47,"user_count_K":100,)"
    R"("arrival_rate_PA":0.1,"target_detection_PD":0.99,"outage_PO":0.1})";

std::string replace_first(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal config takes documented defaults") {
    const detector::SystemConfig config = system_config_from_json_text(kMinimalConfig);
    CHECK(config.antennas_M == 128);
    CHECK(config.pilot_length_L == 47);
    CHECK(config.user_count_K == 100);
    CHECK(config.pilot_snr_db == 15.0);
    CHECK(config.noise_variance() == 47.0);
    CHECK(config.tail_model == detector::TailModel::gaussian);
    CHECK(config.crosscorr_model == detector::CrossCorrModel::paper_unit);
}

TEST_CASE("config errors are descriptive") {
    CHECK_THROWS_WITH_AS(
        system_config_from_json_text(replace_first(kMinimalConfig, "47", "48")),
        doctest::Contains("prime"), ConfigError);
    CHECK_THROWS_WITH_AS(
        system_config_from_json_text(replace_first(kMinimalConfig, R"("user_count_K":100)",
                                                   R"("user_count_K":2300)")),
        doctest::Contains("2162"), ConfigError);
    CHECK_THROWS_WITH_AS(
        system_config_from_json_text(replace_first(kMinimalConfig, "antennas_M", "antennaz_M")),
        doctest::Contains("antennaz_M"), ConfigError);
    CHECK_THROWS_AS(system_config_from_json_text("{not json"), ConfigError);
    CHECK_THROWS_WITH_AS(system_config_from_json_text(R"({"antennas_M":128})"),
                         doctest::Contains("pilot_length_L"), ConfigError);
}

TEST_CASE("sweep spec parsing and validation") {
    const std::string sweep_text = std::string(R"({"axis":"arrival_rate_PA",)"
                                               R"("grid":[0.1,0.2,0.5],)"
                                               R"("pd_targets":[0.9,0.99],)"
                                               R"("couple_kmax":true,"seed":7,"fixed":)") +
                                   kMinimalConfig + "}";
    const SweepSpec spec = sweep_spec_from_json_text(sweep_text);
    CHECK(spec.axis == SweepAxis::arrival_rate_PA);
    CHECK(spec.grid.size() == 3);
    CHECK(spec.pd_targets.size() == 2);
    CHECK(spec.couple_kmax);
    CHECK(spec.mc_trials == 0);
    CHECK(spec.seed == 7);

    CHECK_THROWS_WITH_AS(sweep_spec_from_json_text(replace_first(sweep_text, "[0.1,0.2,0.5]",
                                                                 "[0.5,0.2]")),
                         doctest::Contains("strictly increasing"), ConfigError);
    CHECK_THROWS_WITH_AS(sweep_spec_from_json_text(replace_first(sweep_text, R"("seed":7)",
                                                                 R"("sead":7)")),
                         doctest::Contains("sead"), ConfigError);
    // Defaults: pd_targets falls back to the fixed config's target.
    const SweepSpec defaulted = sweep_spec_from_json_text(
        replace_first(sweep_text, R"("pd_targets":[0.9,0.99],)", ""));
    CHECK(defaulted.pd_targets.size() == 1);
    CHECK(defaulted.pd_targets[0] == 0.99);
}

TEST_CASE("load_config dispatches on the axis key") {
    const char* path_cfg = "build_test_config.json";
    {
        std::ofstream out(path_cfg);
        out << kMinimalConfig;
    }
    auto loaded = load_config(path_cfg);
    CHECK(std::holds_alternative<detector::SystemConfig>(loaded));
    std::remove(path_cfg);
    CHECK_THROWS_AS(load_config("does_not_exist.json"), IoError);
}

TEST_CASE("single-point sweep emits one row per target with empty MC columns") {
    SweepSpec spec;
    spec.axis = SweepAxis::antennas_M;
    spec.grid = {32};
    spec.fixed = system_config_from_json_text(kMinimalConfig);
    spec.pd_targets = {0.9, 0.99, 0.999};
    spec.couple_kmax = false;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.user_count_K == 100);
        CHECK(row.status == "ok");
        CHECK(row.omega.has_value());
        CHECK(row.pfa_analytic.has_value());
        CHECK_FALSE(row.pd_mc.has_value());
        CHECK(row.mode.empty());
        const std::string csv = to_csv_row(row);
        CHECK(csv.find(",,") != std::string::npos);  // empty MC cells present
    }
    CHECK(rows[0].target_detection_PD == 0.9);
    CHECK(rows[2].target_detection_PD == 0.999);
}

TEST_CASE("coupled sweeps recompute K and flag degenerate points") {
    // M = 1 at P_A = 0.5, P_O = 0.25 is unsatisfiable; M = 64 with a tiny
    // pilot pool must cap K at L^2 - L.
    SweepSpec spec;
    spec.axis = SweepAxis::antennas_M;
    spec.grid = {1, 64};
    spec.fixed = system_config_from_json_text(kMinimalConfig);
    spec.fixed.pilot_length_L = 5;
    spec.fixed.user_count_K = 10;
    spec.fixed.arrival_rate_PA = 0.5;
    spec.fixed.outage_PO = 0.25;
    spec.pd_targets = {0.9};
    spec.couple_kmax = true;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "kmax_zero");
    CHECK(rows[0].kmax == 0);
    CHECK_FALSE(rows[0].omega.has_value());
    CHECK(rows[1].status == "k_capped");
    CHECK(rows[1].kmax > 20);
    CHECK(rows[1].user_count_K == 20);  // 5^2 - 5
    CHECK(rows[1].omega.has_value());
}

TEST_CASE("sweep with MC trials populates empirical columns deterministically") {
    SweepSpec spec;
    spec.axis = SweepAxis::arrival_rate_PA;
    spec.grid = {0.1, 0.3};
    spec.fixed = system_config_from_json_text(kMinimalConfig);
    spec.fixed.antennas_M = 16;
    spec.fixed.user_count_K = 30;
    spec.pd_targets = {0.9};
    spec.couple_kmax = false;
    spec.mc_trials = 4000;
    spec.seed = 12;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.pd_mc.has_value());
        CHECK(row.pfa_mc.has_value());
        CHECK(row.mode == "model_faithful");
        CHECK(row.trials == 4000);
        CHECK(*row.pd_ci_low <= *row.pd_mc);
        CHECK(*row.pd_ci_high >= *row.pd_mc);
    }
    CHECK(rows[0].seed != rows[1].seed);  // per-row substreams

    std::ostringstream first, second;
    emit_csv(rows, first);
    emit_csv(run_sweep(spec), second);
    CHECK(first.str() == second.str());  // end-to-end determinism
}

TEST_CASE("csv schema carries the required columns in order") {
    const std::string header = csv_header();
    for (const char* name : {"M", "L", "K", "P_A", "P_D", "P_O", "kmax", "omega",
                             "pfa_analytic"}) {
        const std::string cell = std::string(",") + name + ",";
        CHECK((header.find(cell) != std::string::npos ||
               header.rfind(name + std::string(","), 0) == 0));
    }
    std::ostringstream out;
    emit_csv({}, out);
    CHECK(out.str() == header + "\n");
    CHECK(out.str().find('\r') == std::string::npos);  // LF endings only
}

TEST_CASE("emit_csv writes files and reports IO failures") {
    SweepSpec spec;
    spec.axis = SweepAxis::antennas_M;
    spec.grid = {16};
    spec.fixed = system_config_from_json_text(kMinimalConfig);
    spec.pd_targets = {0.9};
    const auto rows = run_sweep(spec);
    const char* path = "build_test_rows.csv";
    emit_csv(rows, path);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream content;
    content << in.rdbuf();
    std::ostringstream expected;
    emit_csv(rows, expected);
    CHECK(content.str() == expected.str());
    std::remove(path);
    CHECK_THROWS_AS(emit_csv(rows, "no_such_dir/x.csv"), IoError);
}

TEST_CASE("preset sweeps are well-formed") {
    const SweepSpec fig2 = fig2_preset();
    CHECK(fig2.axis == SweepAxis::antennas_M);
    CHECK(fig2.grid.size() == 5);
    CHECK(fig2.fixed.pilot_length_L == 97);
    CHECK(fig2.fixed.arrival_rate_PA == 0.1);
    CHECK(fig2.couple_kmax);
    const SweepSpec fig3 = fig3_preset();
    CHECK(fig3.axis == SweepAxis::arrival_rate_PA);
    CHECK(fig3.grid.size() == 9);
    CHECK(fig3.fixed.antennas_M == 128);
    CHECK(fig3.fixed.pilot_length_L == 47);
    CHECK_NOTHROW(fig2.validate());
    CHECK_NOTHROW(fig3.validate());
}

TEST_CASE("arrival-rate preset: scheduling size shrinks as arrivals intensify") {
    const auto rows = run_sweep(fig3_preset());
    REQUIRE(rows.size() == 27);  // 9 grid points x 3 targets
    int prev = 1 << 30;
    for (std::size_t i = 0; i < rows.size(); i += 3) {
        CHECK(rows[i].kmax < prev);
        prev = rows[i].kmax;
        CHECK(rows[i].status == "ok");
    }
}
