// gfdet: grant-free uplink user-detection analysis CLI.
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "gfdet/detector.hpp"
#include "gfdet/montecarlo.hpp"
#include "gfdet/pilot.hpp"
#include "gfdet/runner.hpp"

namespace {

using gfdet::detector::SystemConfig;
using gfdet::runner::format_double;

struct DetectorFlags {
    int antennas = 0;
    int pilot_len = 0;
    int users = 0;
    double arrival = 0.0;
    double pd = 0.99;
    double po = 0.1;
    double snr_db = 15.0;
    double noise_var = -1.0;  // <0 means default (L)
    std::string tail = "gaussian";
    std::string xcorr = "paper";
    int probe_kr = 0;  // 0 = default (smallest root group)
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& flags) {
    cmd->add_option("--antennas", flags.antennas, "BS antenna count M")->required();
    cmd->add_option("--pilot-len", flags.pilot_len, "pilot length L (prime)")->required();
    cmd->add_option("--users", flags.users, "scheduling group size K")->required();
    cmd->add_option("--arrival", flags.arrival, "per-user arrival rate P_A")->required();
    cmd->add_option("--pd", flags.pd, "target detection probability");
    cmd->add_option("--po", flags.po, "outage probability P_O");
    cmd->add_option("--snr-db", flags.snr_db, "pilot SNR over per-symbol noise (dB)");
    cmd->add_option("--noise-var", flags.noise_var, "per-symbol noise variance (default: L)");
    cmd->add_option("--tail", flags.tail, "tail model: gaussian|exact")
        ->check(CLI::IsMember({"gaussian", "exact", "exact_chi_square"}));
    cmd->add_option("--xcorr", flags.xcorr, "cross-correlation model: paper|zc")
        ->check(CLI::IsMember({"paper", "zc", "paper_unit", "true_zc"}));
    cmd->add_option("--probe-kr", flags.probe_kr,
                    "probe user's root-group size (default: smallest group)");
}

SystemConfig to_config(const DetectorFlags& flags) {
    SystemConfig config;
    config.antennas_M = flags.antennas;
    config.pilot_length_L = flags.pilot_len;
    config.user_count_K = flags.users;
    config.arrival_rate_PA = flags.arrival;
    config.target_detection_PD = flags.pd;
    config.outage_PO = flags.po;
    config.pilot_snr_db = flags.snr_db;
    if (flags.noise_var >= 0.0) config.noise_per_symbol_variance = flags.noise_var;
    config.tail_model = gfdet::detector::tail_model_from_string(flags.tail);
    config.crosscorr_model = gfdet::detector::crosscorr_model_from_string(flags.xcorr);
    config.validate();
    return config;
}

std::string config_echo_csv(const SystemConfig& config) {
    std::ostringstream out;
    out << config.antennas_M << ',' << config.pilot_length_L << ',' << config.user_count_K
        << ',' << format_double(config.arrival_rate_PA) << ','
        << format_double(config.target_detection_PD) << ',' << format_double(config.outage_PO)
        << ',' << format_double(config.pilot_snr_db) << ','
        << format_double(config.noise_variance()) << ','
        << gfdet::detector::to_string(config.tail_model) << ','
        << gfdet::detector::to_string(config.crosscorr_model);
    return out.str();
}

constexpr const char* kConfigHeader = "M,L,K,P_A,P_D,P_O,snr_db,noise_var,tail,xcorr";

int run(int argc, char** argv) {
    CLI::App app{"grant-free uplink user-detection analysis toolkit"};
    app.require_subcommand(1);

    // pilot dump
    auto* pilot_cmd = app.add_subcommand("pilot", "Zadoff-Chu pilot utilities");
    pilot_cmd->require_subcommand(1);
    auto* dump_cmd = pilot_cmd->add_subcommand("dump", "emit one pilot sequence as CSV");
    int dump_len = 0, dump_root = 0, dump_shift = 0;
    dump_cmd->add_option("--length", dump_len, "sequence length L (prime)")->required();
    dump_cmd->add_option("--root", dump_root, "root index in [1, L-1]")->required();
    dump_cmd->add_option("--shift", dump_shift, "cyclic shift in [0, L-1]");

    // threshold / pfa
    auto* threshold_cmd = app.add_subcommand("threshold", "solve the detection threshold");
    DetectorFlags threshold_flags;
    bool threshold_header = false;
    add_detector_flags(threshold_cmd, threshold_flags);
    threshold_cmd->add_flag("--header", threshold_header, "print the CSV header line");

    auto* pfa_cmd = app.add_subcommand("pfa", "evaluate miss/false-alarm at a threshold");
    DetectorFlags pfa_flags;
    bool pfa_header = false;
    double pfa_omega = -1.0;
    add_detector_flags(pfa_cmd, pfa_flags);
    pfa_cmd->add_option("--omega", pfa_omega, "threshold (default: solve it first)");
    pfa_cmd->add_flag("--header", pfa_header, "print the CSV header line");

    // kmax / minlen: the shared detector flags are accepted everywhere so
    // call sites can reuse one flag block; only the relevant ones matter.
    DetectorFlags unused_kmax, unused_minlen;
    auto* kmax_cmd = app.add_subcommand("kmax", "maximum scheduling size");
    int kmax_m = 0;
    double kmax_pa = 0.0, kmax_po = 0.1;
    bool kmax_header = false;
    kmax_cmd->add_option("--antennas", kmax_m, "BS antenna count M")->required();
    kmax_cmd->add_option("--arrival", kmax_pa, "per-user arrival rate P_A")->required();
    kmax_cmd->add_option("--po", kmax_po, "outage probability P_O");
    kmax_cmd->add_option("--pilot-len", unused_kmax.pilot_len, "(ignored)");
    kmax_cmd->add_option("--users", unused_kmax.users, "(ignored)");
    kmax_cmd->add_option("--pd", unused_kmax.pd, "(ignored)");
    kmax_cmd->add_option("--snr-db", unused_kmax.snr_db, "(ignored)");
    kmax_cmd->add_option("--tail", unused_kmax.tail, "(ignored)");
    kmax_cmd->add_option("--xcorr", unused_kmax.xcorr, "(ignored)");
    kmax_cmd->add_flag("--header", kmax_header, "print the CSV header line");

    auto* minlen_cmd = app.add_subcommand("minlen", "minimum prime pilot length");
    int minlen_kmax = 0, minlen_m = 0;
    double minlen_pa = 0.0, minlen_po = 0.1;
    bool minlen_header = false;
    minlen_cmd->add_option("--kmax", minlen_kmax, "target capacity K_max");
    minlen_cmd->add_option("--antennas", minlen_m, "compute K_max from M when --kmax absent");
    minlen_cmd->add_option("--arrival", minlen_pa, "arrival rate for computed K_max");
    minlen_cmd->add_option("--po", minlen_po, "outage probability for computed K_max");
    minlen_cmd->add_option("--pilot-len", unused_minlen.pilot_len, "(ignored)");
    minlen_cmd->add_option("--users", unused_minlen.users, "(ignored)");
    minlen_cmd->add_option("--pd", unused_minlen.pd, "(ignored)");
    minlen_cmd->add_option("--snr-db", unused_minlen.snr_db, "(ignored)");
    minlen_cmd->add_option("--tail", unused_minlen.tail, "(ignored)");
    minlen_cmd->add_option("--xcorr", unused_minlen.xcorr, "(ignored)");
    minlen_cmd->add_flag("--header", minlen_header, "print the CSV header line");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo validation of one point");
    DetectorFlags simulate_flags;
    bool simulate_header = false;
    std::string simulate_mode = "model";
    long long simulate_trials = 100000;
    std::uint64_t simulate_seed = 1;
    int simulate_probe = 0;
    int simulate_workers = 0;
    add_detector_flags(simulate_cmd, simulate_flags);
    simulate_cmd->add_option("--mode", simulate_mode, "model|waveform")
        ->check(CLI::IsMember({"model", "model_faithful", "waveform"}));
    simulate_cmd->add_option("--trials", simulate_trials, "total conditioned trials");
    simulate_cmd->add_option("--seed", simulate_seed, "RNG seed");
    simulate_cmd->add_option("--probe-user", simulate_probe, "probe user index (1-based)");
    simulate_cmd->add_option("--workers", simulate_workers, "worker threads (0 = auto)");
    simulate_cmd->add_flag("--header", simulate_header, "print the CSV header line");

    // sweep / fig2 / fig3
    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep from a JSON config");
    std::string sweep_config, sweep_out;
    long long sweep_trials = -1;
    std::int64_t sweep_seed = -1;
    sweep_cmd->add_option("--config", sweep_config, "sweep JSON file")->required();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path")->required();
    sweep_cmd->add_option("--trials", sweep_trials, "override mc_trials");
    sweep_cmd->add_option("--seed", sweep_seed, "override seed");

    auto* fig2_cmd = app.add_subcommand("fig2", "bundled antenna-size sweep (L=97, P_A=0.1)");
    std::string fig2_out;
    long long fig2_trials = -1;
    std::int64_t fig2_seed = -1;
    fig2_cmd->add_option("--out", fig2_out, "output CSV path")->required();
    fig2_cmd->add_option("--trials", fig2_trials, "override mc_trials");
    fig2_cmd->add_option("--seed", fig2_seed, "override seed");

    auto* fig3_cmd = app.add_subcommand("fig3", "bundled arrival-rate sweep (M=128, L=47)");
    std::string fig3_out;
    long long fig3_trials = -1;
    std::int64_t fig3_seed = -1;
    fig3_cmd->add_option("--out", fig3_out, "output CSV path")->required();
    fig3_cmd->add_option("--trials", fig3_trials, "override mc_trials");
    fig3_cmd->add_option("--seed", fig3_seed, "override seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int help_code = app.exit(e);  // prints help or the error text
        return e.get_exit_code() == 0 ? help_code : 2;
    }

    if (dump_cmd->parsed()) {
        gfdet::pilot::PilotSpec spec{dump_len, dump_root, dump_shift};
        const auto seq = gfdet::pilot::generate_zc(spec);
        std::cout << "index,re,im\n";
        for (std::size_t l = 0; l < seq.size(); ++l) {
            std::cout << l << ',' << format_double(seq[l].real()) << ','
                      << format_double(seq[l].imag()) << '\n';
        }
        return 0;
    }

    if (threshold_cmd->parsed() || pfa_cmd->parsed()) {
        const bool solving = threshold_cmd->parsed();
        const DetectorFlags& flags = solving ? threshold_flags : pfa_flags;
        const SystemConfig config = to_config(flags);
        const int group =
            flags.probe_kr > 0 ? flags.probe_kr : config.default_probe_group_size();
        double omega, miss, pfa;
        if (solving || pfa_omega < 0.0) {
            const auto solved = gfdet::detector::solve_threshold(config, group);
            omega = solved.omega;
            miss = solved.achieved_miss;
            pfa = solved.analytic_pfa;
        } else {
            const auto model = gfdet::detector::build_statistic_model(config, group);
            omega = pfa_omega;
            miss = gfdet::detector::miss_probability(omega, model);
            pfa = gfdet::detector::false_alarm_probability(omega, model);
        }
        if (solving ? threshold_header : pfa_header) {
            std::cout << kConfigHeader << ",K_r,omega,miss,pfa\n";
        }
        std::cout << config_echo_csv(config) << ',' << group << ',' << format_double(omega)
                  << ',' << format_double(miss) << ',' << format_double(pfa) << '\n';
        return 0;
    }

    if (kmax_cmd->parsed()) {
        const int kmax = gfdet::detector::max_scheduling_size(kmax_m, kmax_pa, kmax_po);
        if (kmax_header) std::cout << "M,P_A,P_O,kmax,status\n";
        std::cout << kmax_m << ',' << format_double(kmax_pa) << ',' << format_double(kmax_po)
                  << ',' << kmax << ',' << (kmax > 0 ? "ok" : "unsatisfiable") << '\n';
        return 0;
    }

    if (minlen_cmd->parsed()) {
        int target = minlen_kmax;
        if (target <= 0) {
            if (minlen_m <= 0) {
                throw gfdet::runner::ConfigError("minlen: provide --kmax or --antennas/--arrival");
            }
            target = gfdet::detector::max_scheduling_size(minlen_m, minlen_pa, minlen_po);
            if (target == 0) {
                throw gfdet::runner::ConfigError("minlen: computed K_max is 0 (unsatisfiable)");
            }
        }
        if (minlen_header) std::cout << "kmax,min_pilot_length\n";
        std::cout << target << ',' << gfdet::detector::min_pilot_length(target) << '\n';
        return 0;
    }

    if (simulate_cmd->parsed()) {
        const SystemConfig config = to_config(simulate_flags);
        const int group = simulate_flags.probe_kr > 0 ? simulate_flags.probe_kr
                                                      : config.default_probe_group_size();
        const auto solved = gfdet::detector::solve_threshold(config, group);
        gfdet::montecarlo::TrialPlan plan;
        plan.config = config;
        plan.mode = gfdet::montecarlo::trial_mode_from_string(simulate_mode);
        plan.trials = simulate_trials;
        plan.seed = simulate_seed;
        plan.probe_user_index = simulate_probe;
        const auto report = gfdet::montecarlo::run_trials(plan, solved.omega, simulate_workers);
        if (simulate_header) {
            std::cout << kConfigHeader
                      << ",mode,trials,seed,probe_user,omega,miss,pfa_analytic,pd_mc,"
                         "pd_ci_low,pd_ci_high,pfa_mc,pfa_ci_low,pfa_ci_high,rng\n";
        }
        std::cout << config_echo_csv(config) << ','
                  << gfdet::montecarlo::to_string(report.mode_echo) << ',' << plan.trials << ','
                  << report.seed_echo << ','
                  << (plan.probe_user_index > 0 ? plan.probe_user_index : 0) << ','
                  << format_double(solved.omega) << ',' << format_double(solved.achieved_miss)
                  << ',' << format_double(solved.analytic_pfa) << ','
                  << format_double(report.empirical_pd) << ','
                  << format_double(report.wilson_ci_pd.low) << ','
                  << format_double(report.wilson_ci_pd.high) << ','
                  << format_double(report.empirical_pfa) << ','
                  << format_double(report.wilson_ci_pfa.low) << ','
                  << format_double(report.wilson_ci_pfa.high) << ',' << report.rng_version
                  << '\n';
        return 0;
    }

    const auto run_sweep_to_file = [](gfdet::runner::SweepSpec spec, long long trials,
                                      std::int64_t seed, const std::string& out_path) {
        if (trials >= 0) spec.mc_trials = trials;
        if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
        const auto rows = gfdet::runner::run_sweep(spec);
        gfdet::runner::emit_csv(rows, out_path);
        std::cerr << "wrote " << rows.size() << " rows to " << out_path << '\n';
    };

    if (sweep_cmd->parsed()) {
        auto loaded = gfdet::runner::load_config(sweep_config);
        if (!std::holds_alternative<gfdet::runner::SweepSpec>(loaded)) {
            throw gfdet::runner::ConfigError("sweep: config file does not describe a sweep "
                                             "(missing 'axis')");
        }
        run_sweep_to_file(std::get<gfdet::runner::SweepSpec>(loaded), sweep_trials, sweep_seed,
                          sweep_out);
        return 0;
    }
    if (fig2_cmd->parsed()) {
        run_sweep_to_file(gfdet::runner::fig2_preset(), fig2_trials, fig2_seed, fig2_out);
        return 0;
    }
    if (fig3_cmd->parsed()) {
        run_sweep_to_file(gfdet::runner::fig3_preset(), fig3_trials, fig3_seed, fig3_out);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gfdet::runner::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const gfdet::runner::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
