// command-line front end: estimate on user CSV data, synthetic simulation
// sweeps, per-stage contraction traces, and the chain-pattern ratio table
//
// exit codes: 0 success, 2 malformed input data, 3 solver failure,
// 4 bad configuration

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqglasso/experiment.hpp"

namespace {

using namespace seqglasso;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitConfig = 4;

WeightKind penalty_from_name(const std::string& name) {
    if (name == "scad") return WeightKind::Scad;
    if (name == "mcp") return WeightKind::Mcp;
    if (name == "lasso") return WeightKind::Constant;
    throw InvalidInput("unknown penalty: " + name + " (expected scad|mcp|lasso)");
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw InvalidInput("cannot write " + (dir / name).string());
    return f;
}

int jobs_override(int flag_value) {
    const char* env = std::getenv("SEQGLASSO_THREADS");
    if (env == nullptr || *env == '\0') return flag_value;
    const int v = std::atoi(env);
    if (v < 1) throw InvalidInput("SEQGLASSO_THREADS must be a positive integer");
    return v;
}

struct EstimateArgs {
    std::string input;
    bool header = false;
    double lambda = 0.0;
    std::string penalty = "scad";
    double gamma = 2.1;
    int iters = 4;
    bool npn = false;
    double tol = 1e-6;
    std::string out = ".";
};

int cmd_estimate(const EstimateArgs& a) {
    DataMatrix x;
    try {
        x = read_data_csv_file(a.input, a.header);
        validate_for_estimation(x);
    } catch (const InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }

    SequenceConfig cfg(WeightSpec{penalty_from_name(a.penalty), a.lambda, a.gamma}, a.iters);
    cfg.solver.kkt_tol = a.tol;

    const auto t0 = std::chrono::steady_clock::now();
    SequenceResult res = a.npn ? estimate_npn(x, cfg) : run_sequence(sample_covariance(x), cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir(a.out);
    {
        std::ofstream f = open_out(dir, "theta.csv");
        write_matrix_csv(f, res.theta_final);
    }
    {
        std::ofstream f = open_out(dir, "psi.csv");
        write_matrix_csv(f, res.psi_stages.back());
    }
    {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& e : support(res.psi_stages.back()))
            edges.push_back({e.first, e.second, res.theta_final(e.first, e.second)});
        std::ofstream f = open_out(dir, "edges.json");
        f << edges.dump(2) << '\n';
    }
    {
        nlohmann::json meta;
        meta["input"] = a.input;
        meta["n"] = x.n;
        meta["d"] = x.d;
        meta["lambda"] = a.lambda;
        meta["penalty"] = a.penalty;
        meta["gamma"] = a.gamma;
        meta["iters"] = a.iters;
        meta["npn"] = a.npn;
        meta["tol"] = a.tol;
        meta["per_stage_kkt"] = res.per_stage_kkt;
        meta["per_stage_sweeps"] = res.per_stage_sweeps;
        meta["per_stage_ridge"] = res.per_stage_ridge;
        meta["runtime_seconds"] = secs;
        std::ofstream f = open_out(dir, "meta.json");
        f << meta.dump(2) << '\n';
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string family = "band";
    int k = 0;
    int d = 50;
    int n = 200;
    int reps = 20;
    std::vector<double> lambdas;
    int lambda_count = 15;
    double lambda_min = 0.01;
    double lambda_max = 1.0;
    std::string penalty = "scad";
    double gamma = 2.1;
    int iters = 4;
    std::uint64_t seed = 1;
    bool npn = false;
    bool literal_cov = false;
    int jobs = 1;
    double threshold = 0.9;
    double tol = 1e-6;
    double lambda = 0.1;  // trace only
    std::string out = ".";
};

ExperimentConfig to_config(const SimulateArgs& a) {
    ExperimentConfig cfg;
    cfg.family = family_from_name(a.family);
    cfg.k = a.k;
    cfg.d = a.d;
    cfg.n = a.n;
    cfg.reps = a.reps;
    cfg.lambdas = a.lambdas.empty() ? log_spaced_grid(a.lambda_count, a.lambda_min, a.lambda_max)
                                    : a.lambdas;
    cfg.kind = penalty_from_name(a.penalty);
    cfg.gamma = a.gamma;
    cfg.iters = a.iters;
    cfg.seed = a.seed;
    cfg.npn = a.npn;
    cfg.reading = a.literal_cov ? ModelReading::LiteralCovariance : ModelReading::Precision;
    cfg.jobs = jobs_override(a.jobs);
    cfg.success_threshold = a.threshold;
    cfg.solver.kkt_tol = a.tol;
    return cfg;
}

int cmd_simulate(const SimulateArgs& a) {
    SimulationOutput out = run_simulation(to_config(a));
    const std::filesystem::path dir(a.out);
    {
        std::ofstream f = open_out(dir, "metrics.csv");
        write_metrics_csv(f, out.rows);
    }
    {
        std::ofstream f = open_out(dir, "summary.csv");
        write_summary_csv(f, out.summary);
    }
    {
        std::ofstream f = open_out(dir, "model.json");
        f << model_to_json(out.model).dump(2) << '\n';
    }
    if (!out.succeeded(to_config(a).success_threshold)) {
        std::cerr << "solver failures: only " << out.reps_ok << "/" << out.reps_total
                  << " replicates succeeded\n";
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_trace(const SimulateArgs& a) {
    ExperimentConfig cfg = to_config(a);
    TraceOutput out = run_trace(cfg, a.lambda);
    const std::filesystem::path dir(a.out);
    {
        std::ofstream f = open_out(dir, "trace.csv");
        write_trace_csv(f, out.rows);
    }
    {
        std::ofstream f = open_out(dir, "model.json");
        f << model_to_json(out.model).dump(2) << '\n';
    }
    if (out.reps_ok < cfg.success_threshold * out.reps_total - 1e-12) {
        std::cerr << "solver failures: only " << out.reps_ok << "/" << out.reps_total
                  << " replicates succeeded\n";
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_pattern(int k_min, int k_max, int d, const std::string& out) {
    std::vector<PatternRow> rows = pattern_table(k_min, k_max, d);
    std::ofstream f = open_out(std::filesystem::path(out), "pattern.csv");
    write_pattern_csv(f, rows);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse inverse-correlation estimation via reweighted graphical lasso"};
    app.require_subcommand(1);

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "fit a concentration matrix to CSV data");
    estimate->add_option("--input", est.input, "n x d numeric CSV")->required();
    estimate->add_flag("--header", est.header, "skip the first line");
    estimate->add_option("--lambda", est.lambda, "base penalty level")->required();
    estimate->add_option("--penalty", est.penalty, "scad|mcp|lasso (default scad)");
    estimate->add_option("--gamma", est.gamma, "penalty shape parameter");
    estimate->add_option("--iters", est.iters, "number of reweighted stages");
    estimate->add_flag("--npn", est.npn, "rank-based (nonparanormal) input path");
    estimate->add_option("--tol", est.tol, "KKT certification tolerance");
    estimate->add_option("--out", est.out, "output directory");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "synthetic sweep over a lambda grid");
    simulate->add_option("--family", sim.family, "band|random|chain|star");
    simulate->add_option("--k", sim.k, "chain/star size parameter");
    simulate->add_option("--d", sim.d, "dimension");
    simulate->add_option("--n", sim.n, "sample size");
    simulate->add_option("--reps", sim.reps, "number of replicates");
    simulate->add_option("--lambdas", sim.lambdas, "explicit lambda grid")->expected(-1);
    simulate->add_option("--lambda-count", sim.lambda_count, "log-spaced grid size");
    simulate->add_option("--lambda-min", sim.lambda_min, "grid lower endpoint");
    simulate->add_option("--lambda-max", sim.lambda_max, "grid upper endpoint");
    simulate->add_option("--penalty", sim.penalty, "scad|mcp|lasso");
    simulate->add_option("--gamma", sim.gamma, "penalty shape parameter");
    simulate->add_option("--iters", sim.iters, "number of reweighted stages");
    simulate->add_option("--seed", sim.seed, "model seed; replicate r draws with seed+1+r");
    simulate->add_flag("--npn", sim.npn, "rank-based estimation path");
    simulate->add_flag("--literal-cov", sim.literal_cov,
                       "read the constructed sparse matrix as the covariance");
    simulate->add_option("--jobs", sim.jobs, "replicate parallelism");
    simulate->add_option("--threshold", sim.threshold, "required replicate success fraction");
    simulate->add_option("--tol", sim.tol, "KKT certification tolerance");
    simulate->add_option("--out", sim.out, "output directory");

    SimulateArgs tra;
    CLI::App* trace = app.add_subcommand("trace", "per-stage error trace at one lambda");
    trace->add_option("--family", tra.family, "band|random|chain|star");
    trace->add_option("--k", tra.k, "chain/star size parameter");
    trace->add_option("--d", tra.d, "dimension");
    trace->add_option("--n", tra.n, "sample size");
    trace->add_option("--reps", tra.reps, "number of replicates");
    trace->add_option("--lambda", tra.lambda, "penalty level (0 = unpenalized single stage)")
        ->required();
    trace->add_option("--penalty", tra.penalty, "scad|mcp|lasso");
    trace->add_option("--gamma", tra.gamma, "penalty shape parameter");
    trace->add_option("--iters", tra.iters, "number of reweighted stages");
    trace->add_option("--seed", tra.seed, "model seed");
    trace->add_flag("--npn", tra.npn, "rank-based estimation path");
    trace->add_flag("--literal-cov", tra.literal_cov,
                    "read the constructed sparse matrix as the covariance");
    trace->add_option("--jobs", tra.jobs, "replicate parallelism");
    trace->add_option("--threshold", tra.threshold, "required replicate success fraction");
    trace->add_option("--tol", tra.tol, "KKT certification tolerance");
    trace->add_option("--out", tra.out, "output directory");

    int k_min = 4, k_max = 50, pat_d = 150;
    std::string pat_out = ".";
    CLI::App* pattern = app.add_subcommand("pattern", "chain-pattern spectral ratio table");
    pattern->add_option("--k-min", k_min, "smallest chain length");
    pattern->add_option("--k-max", k_max, "largest chain length");
    pattern->add_option("--d", pat_d, "ambient dimension");
    pattern->add_option("--out", pat_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (estimate->parsed()) return cmd_estimate(est);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (trace->parsed()) return cmd_trace(tra);
        return cmd_pattern(k_min, k_max, pat_d, pat_out);
    } catch (const CsvParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NotConverged& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const StageFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
}
