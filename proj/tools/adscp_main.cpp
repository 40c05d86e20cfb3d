// Command-line front end: simulate / test / detect / reduce / bench.
// Exit codes: 0 success, 2 data error, 3 degenerate statistics,
// 4 no change signal (reduce with a selected dimension of zero).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "adscp/adscp.hpp"

namespace {

using nlohmann::json;

constexpr int k_exit_ok = 0;
constexpr int k_exit_data = 2;
constexpr int k_exit_degenerate = 3;
constexpr int k_exit_no_signal = 4;

json make_manifest(const std::string& command, const std::vector<std::string>& argv,
                   const json& parameters, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
    json j;
    j["version"] = adscp::k_version;
    j["command"] = command;
    j["argv"] = argv;
    j["parameters"] = parameters;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw adscp::DomainError("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

/// Load a sample from either accepted CSV form.  smooth > 0 selects the
/// raw-grid form and projects onto that many Fourier basis functions by
/// least squares; otherwise the file must hold coefficients.
adscp::FunctionalSample load_sample(const std::string& path, int smooth) {
    if (smooth > 0) {
        auto [grid, values] = adscp::read_grid_csv(path);
        return adscp::project(values, adscp::BasisSpec(smooth), grid);
    }
    Eigen::MatrixXd coeffs = adscp::read_coeff_csv(path);
    return adscp::FunctionalSample(std::move(coeffs),
                                   adscp::BasisSpec(static_cast<int>(coeffs.cols())));
}

struct SimulateOpts {
    int n = 0;
    int basis_size = 21;
    std::vector<int> change_points;
    double shift = 0.0;
    int shift_support = 1;
    std::string noise = "gaussian";
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate(const SimulateOpts& opt, const std::vector<std::string>& argv) {
    adscp::SimConfig config{opt.n,           opt.basis_size,
                            opt.change_points, opt.shift,
                            opt.shift_support, adscp::parse_noise_law(opt.noise),
                            opt.seed};
    const adscp::FunctionalSample sample = adscp::generate(config);
    const std::string coeff_path = opt.out + ".csv";
    const std::string truth_path = opt.out + ".truth.json";
    adscp::write_coeff_csv(coeff_path, sample.coeffs());
    write_json_file(truth_path, adscp::to_json(adscp::GroundTruth{config.change_points}, config.n));
    json params;
    params["n"] = config.n;
    params["d"] = config.basis_size;
    params["change_points"] = config.change_points;
    params["u"] = config.shift;
    params["dc"] = config.shift_support;
    params["noise"] = opt.noise;
    params["seed"] = config.seed;
    write_json_file(opt.out + ".manifest.json",
                    make_manifest("simulate", argv, params, {}, {coeff_path, truth_path}));
    std::cout << "wrote " << coeff_path << ", " << truth_path << "\n";
    return k_exit_ok;
}

struct TestOpts {
    std::string input;
    int smooth = 0;
    double level = 0.05;
    std::string out;
};

int run_test(const TestOpts& opt, const std::vector<std::string>& argv) {
    const adscp::FunctionalSample sample = load_sample(opt.input, opt.smooth);
    const adscp::TestResult result = adscp::ads_test(sample, opt.level);
    const json j = adscp::to_json(result);
    std::cout << j.dump(2) << '\n';
    if (!opt.out.empty()) {
        write_json_file(opt.out, j);
        json params;
        params["level"] = opt.level;
        params["smooth"] = opt.smooth;
        write_json_file(opt.out + ".manifest.json",
                        make_manifest("test", argv, params, {opt.input}, {opt.out}));
    }
    return k_exit_ok;
}

struct DetectOpts {
    std::string input;
    int smooth = 0;
    std::optional<int> window;
    std::optional<double> tau1;
    std::optional<double> tau2;
    std::optional<double> trr_ridge;
    std::optional<double> pulse_ridge;
    std::string emit_s;
    std::string out;
};

int run_detect(const DetectOpts& opt, const std::vector<std::string>& argv) {
    const adscp::FunctionalSample sample = load_sample(opt.input, opt.smooth);
    adscp::TrrParams trr = adscp::TrrParams::defaults(sample.size());
    adscp::MpulseParams mp = adscp::MpulseParams::defaults(sample.size());
    if (opt.tau1) trr.tau1 = *opt.tau1;
    if (opt.trr_ridge) trr.ridge = *opt.trr_ridge;
    if (opt.window) {
        mp.window = *opt.window;
        // the pulse ridge depends on the window; recompute unless overridden
        mp.ridge = 0.25 * std::sqrt(std::log(static_cast<double>(sample.size())) / mp.window);
    }
    if (opt.tau2) mp.tau2 = *opt.tau2;
    if (opt.pulse_ridge) mp.ridge = *opt.pulse_ridge;
    const adscp::MpulseResult result = adscp::detect_changes(sample, trr, mp);
    const json j = adscp::to_json(result);
    std::cout << j.dump(2) << '\n';
    if (!opt.emit_s.empty()) adscp::write_s_series_csv(opt.emit_s, result.s_series);
    if (!opt.out.empty()) {
        write_json_file(opt.out, j);
        json params;
        params["smooth"] = opt.smooth;
        params["alpha_n"] = mp.window;
        params["tau1"] = trr.tau1;
        params["tau2"] = mp.tau2;
        params["c_n"] = trr.ridge;
        params["c_tilde"] = mp.ridge;
        std::vector<std::string> outputs{opt.out};
        if (!opt.emit_s.empty()) outputs.push_back(opt.emit_s);
        write_json_file(opt.out + ".manifest.json",
                        make_manifest("detect", argv, params, {opt.input}, outputs));
    }
    return k_exit_ok;
}

struct ReduceOpts {
    std::string input;
    int smooth = 0;
    std::optional<double> tau1;
    std::optional<double> trr_ridge;
    std::string scree;
    std::string out;
};

int run_reduce(const ReduceOpts& opt, const std::vector<std::string>& argv) {
    const adscp::FunctionalSample sample = load_sample(opt.input, opt.smooth);
    adscp::TrrParams trr = adscp::TrrParams::defaults(sample.size());
    if (opt.tau1) trr.tau1 = *opt.tau1;
    if (opt.trr_ridge) trr.ridge = *opt.trr_ridge;
    const adscp::AdsModel model = adscp::fit_ads(sample, trr);
    const std::string model_path = opt.out + ".model.json";
    write_json_file(model_path, adscp::to_json(model));
    if (!opt.scree.empty()) adscp::write_scree_csv(opt.scree, model.eigenvalues);
    json params;
    params["smooth"] = opt.smooth;
    params["tau1"] = trr.tau1;
    params["c_n"] = trr.ridge;
    std::vector<std::string> outputs{model_path};
    if (model.q_hat == 0) {
        if (!opt.scree.empty()) outputs.push_back(opt.scree);
        write_json_file(opt.out + ".manifest.json",
                        make_manifest("reduce", argv, params, {opt.input}, outputs));
        std::cout << "no change signal\n";
        return k_exit_no_signal;
    }
    const std::string reduced_path = opt.out + ".reduced.csv";
    adscp::write_reduced_csv(reduced_path, model.reduced);
    outputs.push_back(reduced_path);
    if (!opt.scree.empty()) outputs.push_back(opt.scree);
    write_json_file(opt.out + ".manifest.json",
                    make_manifest("reduce", argv, params, {opt.input}, outputs));
    std::cout << "wrote " << reduced_path << ", " << model_path << " (q_hat=" << model.q_hat
              << ")\n";
    return k_exit_ok;
}

struct BenchOpts {
    int table = 1;
    int reps = 100;
    std::uint64_t seed = 0;
    std::string out;
};

int run_bench(const BenchOpts& opt, const std::vector<std::string>& argv) {
    const std::vector<adscp::Scenario> scenarios = adscp::table_scenarios(opt.table, opt.seed);
    const std::vector<adscp::ReportRow> rows = adscp::run_grid(scenarios, opt.reps);
    if (opt.out.empty()) {
        adscp::write_report_csv(std::cout, rows);
    } else {
        std::ofstream file(opt.out);
        if (!file) throw adscp::DomainError("cannot open output file: " + opt.out);
        adscp::write_report_csv(file, rows);
        json params;
        params["table"] = opt.table;
        params["reps"] = opt.reps;
        params["seed"] = opt.seed;
        write_json_file(opt.out + ".manifest.json",
                        make_manifest("bench", argv, params, {}, {opt.out}));
        std::cout << "wrote " << opt.out << "\n";
    }
    return k_exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional change point analysis: noise-whitened adjacent-deviation "
                 "subspace reduction, a split-sample existence test, and the MPULSE "
                 "multi-change locator."};
    app.require_subcommand(1);
    app.set_version_flag("--version", adscp::k_version);

    SimulateOpts sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic coefficient sample");
    simulate->add_option("--n", sim.n, "Sample size")->required();
    simulate->add_option("--d", sim.basis_size, "Number of Fourier basis functions (odd)");
    simulate->add_option("--change-points", sim.change_points, "True change points, ascending")
        ->delimiter(',');
    simulate->add_option("--u", sim.shift, "Mean shift magnitude");
    simulate->add_option("--dc", sim.shift_support, "Leading coordinates carrying the shift");
    simulate->add_option("--noise", sim.noise, "Noise law: gaussian or t4")
        ->check(CLI::IsMember({"gaussian", "t4"}));
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--out", sim.out, "Output path prefix")->required();

    TestOpts test;
    CLI::App* test_cmd = app.add_subcommand("test", "Test for the existence of change points");
    test_cmd->add_option("input", test.input, "Input CSV (coefficients, or raw grid with --smooth)")
        ->required();
    test_cmd->add_option("--smooth", test.smooth,
                         "Treat input as a raw-grid CSV and project onto this many Fourier basis "
                         "functions (ordinary least squares)");
    test_cmd->add_option("--level", test.level, "Significance level");
    test_cmd->add_option("--out", test.out, "Write the result JSON here as well");

    DetectOpts det;
    CLI::App* detect = app.add_subcommand("detect", "Locate multiple change points");
    detect->add_option("input", det.input, "Input CSV (coefficients, or raw grid with --smooth)")
        ->required();
    detect->add_option("--smooth", det.smooth, "Project a raw-grid CSV onto this many basis functions");
    detect->add_option("--alpha-n", det.window, "Scan window length (default floor(n^0.6))");
    detect->add_option("--tau1", det.tau1, "Dimension-selection ratio threshold");
    detect->add_option("--tau2", det.tau2, "Interval threshold for the pulse statistic");
    detect->add_option("--c-n", det.trr_ridge, "Dimension-selection ridge");
    detect->add_option("--c-tilde", det.pulse_ridge, "Pulse-statistic ridge");
    detect->add_option("--emit-s", det.emit_s, "Write the pulse statistic series to this CSV");
    detect->add_option("--out", det.out, "Write the result JSON here as well");

    ReduceOpts red;
    CLI::App* reduce = app.add_subcommand("reduce", "Fit the reduction and export the model");
    reduce->add_option("input", red.input, "Input CSV (coefficients, or raw grid with --smooth)")
        ->required();
    reduce->add_option("--smooth", red.smooth, "Project a raw-grid CSV onto this many basis functions");
    reduce->add_option("--tau1", red.tau1, "Dimension-selection ratio threshold");
    reduce->add_option("--c-n", red.trr_ridge, "Dimension-selection ridge");
    reduce->add_option("--scree", red.scree, "Write the eigenvalue scree to this CSV");
    reduce->add_option("--out", red.out, "Output path prefix")->required();

    BenchOpts bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a Monte-Carlo benchmark table");
    bench_cmd->add_option("--table", bench.table, "Benchmark table: 1-2 test, 3-4 estimation")
        ->required()
        ->check(CLI::Range(1, 4));
    bench_cmd->add_option("--reps", bench.reps, "Replications per scenario");
    bench_cmd->add_option("--seed", bench.seed, "Base seed (replication r uses seed + r)");
    bench_cmd->add_option("--out", bench.out, "Output CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    const std::vector<std::string> argv_vec(argv, argv + argc);
    try {
        if (simulate->parsed()) return run_simulate(sim, argv_vec);
        if (test_cmd->parsed()) return run_test(test, argv_vec);
        if (detect->parsed()) return run_detect(det, argv_vec);
        if (reduce->parsed()) return run_reduce(red, argv_vec);
        if (bench_cmd->parsed()) return run_bench(bench, argv_vec);
    } catch (const adscp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_data;
    } catch (const adscp::DegenerateVarianceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_degenerate;
    } catch (const adscp::ConditioningError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_degenerate;
    } catch (const adscp::EmptyReductionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_no_signal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return k_exit_ok;
}
