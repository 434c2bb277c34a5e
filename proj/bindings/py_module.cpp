// Python bindings for the detection-analysis core.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gfdet/detector.hpp"
#include "gfdet/montecarlo.hpp"
#include "gfdet/pilot.hpp"
#include "gfdet/probstat.hpp"
#include "gfdet/rng.hpp"
#include "gfdet/runner.hpp"

namespace py = pybind11;
using namespace gfdet;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Grant-free uplink user-detection analysis: Zadoff-Chu pilots, "
              "Neyman-Pearson thresholds, chi-square mixture tails, and Monte "
              "Carlo validation.";

    // pilot
    py::class_<pilot::PilotSpec>(m, "PilotSpec")
        .def(py::init([](int length, int root, int shift) {
                 pilot::PilotSpec spec{length, root, shift};
                 spec.validate();
                 return spec;
             }),
             py::arg("length_L"), py::arg("root_r"), py::arg("shift_s") = 0)
        .def_readonly("length_L", &pilot::PilotSpec::length_L)
        .def_readonly("root_r", &pilot::PilotSpec::root_r)
        .def_readonly("shift_s", &pilot::PilotSpec::shift_s);
    py::class_<pilot::PilotAssignment>(m, "PilotAssignment")
        .def_readonly("user_count_K", &pilot::PilotAssignment::user_count_K)
        .def_readonly("pilots", &pilot::PilotAssignment::pilots)
        .def_readonly("root_group_sizes", &pilot::PilotAssignment::root_group_sizes)
        .def("root_count", &pilot::PilotAssignment::root_count);
    m.def("is_prime", &pilot::is_prime, py::arg("n"));
    m.def("generate_zc", &pilot::generate_zc, py::arg("spec"));
    m.def("assign_pilots", &pilot::assign_pilots, py::arg("K"), py::arg("L"));
    m.def("cross_correlation", &pilot::cross_correlation, py::arg("a"), py::arg("b"));

    // probstat
    m.def("q_function", &probstat::q_function, py::arg("x"));
    m.def("q_inverse", &probstat::q_inverse, py::arg("p"));
    m.def(
        "binomial_pmf",
        [](int n, double p, int k) { return probstat::binomial_pmf({n, p}, k); },
        py::arg("n"), py::arg("p"), py::arg("k"));
    m.def(
        "binomial_tail",
        [](int n, double p, int m_) { return probstat::binomial_tail({n, p}, m_); },
        py::arg("n"), py::arg("p"), py::arg("m"));
    m.def("chi_square_cdf", &probstat::chi_square_cdf, py::arg("dof"), py::arg("x"));
    m.def("chi_square_sf", &probstat::chi_square_sf, py::arg("dof"), py::arg("x"));

    // detector
    py::enum_<detector::TailModel>(m, "TailModel")
        .value("gaussian", detector::TailModel::gaussian)
        .value("exact_chi_square", detector::TailModel::exact_chi_square);
    py::enum_<detector::CrossCorrModel>(m, "CrossCorrModel")
        .value("paper_unit", detector::CrossCorrModel::paper_unit)
        .value("true_zc", detector::CrossCorrModel::true_zc);
    py::class_<detector::SystemConfig>(m, "SystemConfig")
        .def(py::init([](int M, int L, int K, double PA, double PD, double PO, double snr_db,
                         std::optional<double> noise_var, detector::TailModel tail,
                         detector::CrossCorrModel xcorr) {
                 detector::SystemConfig config;
                 config.antennas_M = M;
                 config.pilot_length_L = L;
                 config.user_count_K = K;
                 config.arrival_rate_PA = PA;
                 config.target_detection_PD = PD;
                 config.outage_PO = PO;
                 config.pilot_snr_db = snr_db;
                 config.noise_per_symbol_variance = noise_var;
                 config.tail_model = tail;
                 config.crosscorr_model = xcorr;
                 config.validate();
                 return config;
             }),
             py::arg("antennas_M"), py::arg("pilot_length_L"), py::arg("user_count_K"),
             py::arg("arrival_rate_PA"), py::arg("target_detection_PD"), py::arg("outage_PO"),
             py::arg("pilot_snr_db") = 15.0, py::arg("noise_per_symbol_variance") = py::none(),
             py::arg("tail_model") = detector::TailModel::gaussian,
             py::arg("crosscorr_model") = detector::CrossCorrModel::paper_unit)
        .def_readonly("antennas_M", &detector::SystemConfig::antennas_M)
        .def_readonly("pilot_length_L", &detector::SystemConfig::pilot_length_L)
        .def_readonly("user_count_K", &detector::SystemConfig::user_count_K)
        .def_readonly("arrival_rate_PA", &detector::SystemConfig::arrival_rate_PA)
        .def_readonly("target_detection_PD", &detector::SystemConfig::target_detection_PD)
        .def_readonly("outage_PO", &detector::SystemConfig::outage_PO)
        .def_readonly("pilot_snr_db", &detector::SystemConfig::pilot_snr_db)
        .def_readonly("tail_model", &detector::SystemConfig::tail_model)
        .def_readonly("crosscorr_model", &detector::SystemConfig::crosscorr_model)
        .def("noise_variance", &detector::SystemConfig::noise_variance)
        .def("pilot_power", &detector::SystemConfig::pilot_power)
        .def("default_probe_group_size", &detector::SystemConfig::default_probe_group_size);
    py::class_<detector::StatisticModel>(m, "StatisticModel")
        .def_readonly("dof", &detector::StatisticModel::dof)
        .def_readonly("mixture", &detector::StatisticModel::mixture)
        .def_readonly("crosscorr_gain", &detector::StatisticModel::crosscorr_gain)
        .def("var_active", &detector::StatisticModel::var_active, py::arg("q"))
        .def("var_idle", &detector::StatisticModel::var_idle, py::arg("q"));
    py::class_<detector::ThresholdResult>(m, "ThresholdResult")
        .def_readonly("omega", &detector::ThresholdResult::omega)
        .def_readonly("achieved_miss", &detector::ThresholdResult::achieved_miss)
        .def_readonly("analytic_pfa", &detector::ThresholdResult::analytic_pfa)
        .def_readonly("config_echo", &detector::ThresholdResult::config_echo);
    m.def("build_statistic_model", &detector::build_statistic_model, py::arg("config"),
          py::arg("probe_user_root_group_size"));
    m.def("miss_probability", &detector::miss_probability, py::arg("omega"), py::arg("model"));
    m.def("false_alarm_probability", &detector::false_alarm_probability, py::arg("omega"),
          py::arg("model"));
    m.def("solve_threshold",
          py::overload_cast<const detector::SystemConfig&, int>(&detector::solve_threshold),
          py::arg("config"), py::arg("probe_user_root_group_size"));
    m.def("solve_threshold",
          py::overload_cast<const detector::SystemConfig&>(&detector::solve_threshold),
          py::arg("config"));
    m.def("max_scheduling_size", &detector::max_scheduling_size, py::arg("antennas_M"),
          py::arg("arrival_rate_PA"), py::arg("outage_PO"));
    m.def("min_pilot_length", &detector::min_pilot_length, py::arg("k_max"));

    // montecarlo
    py::enum_<montecarlo::TrialMode>(m, "TrialMode")
        .value("model_faithful", montecarlo::TrialMode::model_faithful)
        .value("waveform", montecarlo::TrialMode::waveform);
    py::class_<montecarlo::WilsonInterval>(m, "WilsonInterval")
        .def_readonly("low", &montecarlo::WilsonInterval::low)
        .def_readonly("high", &montecarlo::WilsonInterval::high);
    py::class_<montecarlo::TrialPlan>(m, "TrialPlan")
        .def(py::init([](const detector::SystemConfig& config, montecarlo::TrialMode mode,
                         long long trials, std::uint64_t seed, int probe_user_index) {
                 montecarlo::TrialPlan plan{config, mode, trials, seed, probe_user_index};
                 plan.validate();
                 return plan;
             }),
             py::arg("config"), py::arg("mode"), py::arg("trials"), py::arg("seed") = 0,
             py::arg("probe_user_index") = 0)
        .def_readonly("trials", &montecarlo::TrialPlan::trials)
        .def_readonly("seed", &montecarlo::TrialPlan::seed);
    py::class_<montecarlo::TrialReport>(m, "TrialReport")
        .def_readonly("empirical_pd", &montecarlo::TrialReport::empirical_pd)
        .def_readonly("empirical_pfa", &montecarlo::TrialReport::empirical_pfa)
        .def_readonly("pd_trials", &montecarlo::TrialReport::pd_trials)
        .def_readonly("pfa_trials", &montecarlo::TrialReport::pfa_trials)
        .def_readonly("pd_detections", &montecarlo::TrialReport::pd_detections)
        .def_readonly("pfa_detections", &montecarlo::TrialReport::pfa_detections)
        .def_readonly("wilson_ci_pd", &montecarlo::TrialReport::wilson_ci_pd)
        .def_readonly("wilson_ci_pfa", &montecarlo::TrialReport::wilson_ci_pfa)
        .def_readonly("seed_echo", &montecarlo::TrialReport::seed_echo)
        .def_readonly("rng_version", &montecarlo::TrialReport::rng_version);
    m.def("run_trials", &montecarlo::run_trials, py::arg("plan"), py::arg("omega"),
          py::arg("worker_threads") = 0);

    // runner
    py::class_<runner::SweepSpec>(m, "SweepSpec")
        .def_readonly("grid", &runner::SweepSpec::grid)
        .def_readonly("pd_targets", &runner::SweepSpec::pd_targets)
        .def_readonly("mc_trials", &runner::SweepSpec::mc_trials)
        .def_readonly("seed", &runner::SweepSpec::seed);
    m.def("fig2_preset", &runner::fig2_preset);
    m.def("fig3_preset", &runner::fig3_preset);
    m.def("sweep_spec_from_json_text", &runner::sweep_spec_from_json_text, py::arg("text"));
    m.def(
        "run_sweep_csv",
        [](const runner::SweepSpec& spec) {
            std::ostringstream out;
            runner::emit_csv(runner::run_sweep(spec), out);
            return out.str();
        },
        py::arg("spec"),
        "Run a sweep and return the full CSV document as a string.");

    m.attr("RNG_VERSION") = rng::kRngVersion;
    m.attr("SUBFRAME_DURATION_MS") = detector::kSubframeDurationMs;
    m.attr("SUBBAND_BANDWIDTH_KHZ") = detector::kSubbandBandwidthKHz;
    m.attr("TRANSMISSION_BLOCK_SYMBOLS") = detector::kTransmissionBlockSymbols;
    m.attr("__version__") = "0.1.0";
}
