#pragma once

// Simulation harness: seeded synthetic sweeps over a lambda grid comparing
// the reweighted sequence against the plain graphical lasso and the
// true-support oracle, per-stage contraction traces, and the chain-pattern
// ratio table.  All outputs are deterministic given the config, independent
// of the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "seqglasso/csv.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/metrics.hpp"
#include "seqglasso/npn.hpp"
#include "seqglasso/sequential.hpp"
#include "seqglasso/simgen.hpp"

namespace seqglasso {

struct ExperimentConfig {
    GraphFamily family = GraphFamily::Band;
    int k = 0;  // chain/star size parameter
    int d = 50;
    int n = 200;
    int reps = 20;
    std::vector<double> lambdas;
    WeightKind kind = WeightKind::Scad;
    double gamma = 2.1;
    int iters = 4;
    std::uint64_t seed = 1;
    bool npn = false;
    ModelReading reading = ModelReading::Precision;
    int jobs = 1;
    double success_threshold = 0.9;  // replicate fraction needed for success
    SolverOptions solver;
};

inline std::vector<double> log_spaced_grid(int count, double lo, double hi) {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo))
        throw InvalidInput("log_spaced_grid: need count >= 1 and 0 < lo <= hi");
    std::vector<double> g(static_cast<size_t>(count));
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.d < 2 || cfg.n < 2) throw InvalidInput("experiment: d and n must be >= 2");
    if (cfg.reps < 1) throw InvalidInput("experiment: reps must be >= 1");
    if (cfg.iters < 1) throw InvalidInput("experiment: iters must be >= 1");
    if (cfg.jobs < 1) throw InvalidInput("experiment: jobs must be >= 1");
    if (cfg.lambdas.empty()) throw InvalidInput("experiment: lambda grid is empty");
    for (double l : cfg.lambdas)
        if (!(l > 0.0)) throw InvalidInput("experiment: lambda grid entries must be positive");
}

struct MetricRow {
    int rep = 0;
    double lambda = 0.0;
    std::string method;
    double tpr = 0.0, fpr = 0.0;
    double frob_err_theta = 0.0, spec_err_theta = 0.0, frob_err_psi = 0.0;
    int stages_run = 0;
    std::uint64_t seed = 0;
    bool ok = false;
};

struct SummaryRow {
    double lambda = 0.0;
    std::string method;
    double tpr = 0.0, fpr = 0.0;
    double frob_err_theta = 0.0, spec_err_theta = 0.0, frob_err_psi = 0.0;
    int n_ok = 0;
};

struct SimulationOutput {
    ModelSpec model;
    SymMatrix psi_star;  // truth on the correlation (inverse-correlation) scale
    std::vector<MetricRow> rows;
    std::vector<SummaryRow> summary;
    int reps_ok = 0;
    int reps_total = 0;

    bool succeeded(double threshold) const {
        return reps_ok >= threshold * reps_total - 1e-12;
    }
};

namespace detail {

inline std::string seq_method_name(WeightKind kind) {
    switch (kind) {
        case WeightKind::Scad: return "seq-scad";
        case WeightKind::Mcp: return "seq-mcp";
        default: return "seq-lasso";
    }
}

// Psi* = W* Theta* W* with W*^2 = diag(Sigma*): the truth seen by a solver
// working on the correlation matrix
inline SymMatrix psi_star_of(const ModelSpec& m) {
    const int d = m.theta_true.dim();
    std::vector<double> w(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] = std::sqrt(m.sigma_true(i, i));
    SymMatrix p(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            p.set(i, j, w[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] * m.theta_true(i, j));
    return p;
}

inline SymMatrix rescale_to_theta(const SymMatrix& psi, const std::vector<double>& w_hat) {
    const int d = psi.dim();
    SymMatrix t(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            t.set(i, j, psi(i, j) / (w_hat[static_cast<size_t>(i)] * w_hat[static_cast<size_t>(j)]));
    return t;
}

inline MetricRow scored_row(int rep, double lambda, std::string method, const SymMatrix& psi,
                            const SymMatrix& theta, int stages, std::uint64_t seed,
                            const ModelSpec& m, const SymMatrix& psi_star) {
    MetricRow row;
    row.rep = rep;
    row.lambda = lambda;
    row.method = std::move(method);
    RecoveryRates rates = tpr_fpr(support(psi), m.edges, psi.dim());
    row.tpr = rates.tpr;
    row.fpr = rates.fpr;
    NormErrors te = norm_errors(theta, m.theta_true);
    row.frob_err_theta = te.frob;
    row.spec_err_theta = te.spec;
    row.frob_err_psi = norm_errors(psi, psi_star).frob;
    row.stages_run = stages;
    row.seed = seed;
    row.ok = true;
    return row;
}

inline MetricRow failed_row(int rep, double lambda, std::string method, std::uint64_t seed) {
    MetricRow row;
    row.rep = rep;
    row.lambda = lambda;
    row.method = std::move(method);
    row.seed = seed;
    row.ok = false;
    return row;
}

// estimator input for one replicate: either the Pearson correlation of the
// sample covariance or the repaired rank-based pseudo-correlation
inline CorrelationScale replicate_input(const ExperimentConfig& cfg, const DataMatrix& x) {
    if (!cfg.npn) return correlation_step(sample_covariance(x));
    CorrelationScale cs;
    cs.c_hat = psd_repair(sine_transform(kendall_tau_matrix_fast(x)));
    cs.w_hat.assign(static_cast<size_t>(x.d), 1.0);
    return cs;
}

template <typename Work>
void run_replicates(int reps, int jobs, Work work) {
    if (jobs <= 1) {
        for (int r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) work(r);
    };
    std::vector<std::thread> pool;
    const int count = std::min(jobs, reps);
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline SimulationOutput run_simulation(const ExperimentConfig& cfg) {
    validate(cfg);

    SimulationOutput out;
    std::mt19937_64 model_rng(cfg.seed);
    out.model = build_model(gen_adjacency(cfg.family, cfg.d, cfg.k, model_rng), cfg.reading);
    out.model.family = cfg.family;
    out.model.k = cfg.k;
    out.model.seed = cfg.seed;
    out.psi_star = detail::psi_star_of(out.model);
    out.reps_total = cfg.reps;

    const std::string seq_name = detail::seq_method_name(cfg.kind);
    std::vector<std::vector<MetricRow>> per_rep(static_cast<size_t>(cfg.reps));

    detail::run_replicates(cfg.reps, cfg.jobs, [&](int r) {
        const std::uint64_t data_seed = cfg.seed + 1 + static_cast<std::uint64_t>(r);
        std::vector<MetricRow>& rows = per_rep[static_cast<size_t>(r)];

        CorrelationScale input;
        try {
            DataMatrix x = sample_gaussian(out.model.sigma_true, cfg.n, data_seed);
            input = detail::replicate_input(cfg, x);
        } catch (const NotPositiveDefinite&) {
            for (double lam : cfg.lambdas) {
                rows.push_back(detail::failed_row(r, lam, "glasso-baseline", data_seed));
                rows.push_back(detail::failed_row(r, lam, "oracle", data_seed));
                rows.push_back(detail::failed_row(r, lam, seq_name, data_seed));
            }
            return;
        }

        // the oracle ignores lambda; solve once, report once per grid point
        MetricRow oracle_row;
        try {
            GlassoResult o = solve_oracle(input.c_hat, out.model.edges, cfg.solver);
            oracle_row = detail::scored_row(r, 0.0, "oracle", o.psi,
                                            detail::rescale_to_theta(o.psi, input.w_hat), 1,
                                            data_seed, out.model, out.psi_star);
        } catch (const NotConverged&) {
            oracle_row = detail::failed_row(r, 0.0, "oracle", data_seed);
        } catch (const NotPositiveDefinite&) {
            oracle_row = detail::failed_row(r, 0.0, "oracle", data_seed);
        }

        for (double lam : cfg.lambdas) {
            try {
                SequenceConfig base(WeightSpec{WeightKind::Constant, lam, 2.0}, 1);
                base.solver = cfg.solver;
                SequenceResult b = run_sequence_on_correlation(input.c_hat, input.w_hat, base);
                rows.push_back(detail::scored_row(r, lam, "glasso-baseline", b.psi_stages.back(),
                                                  b.theta_final, 1, data_seed, out.model,
                                                  out.psi_star));
            } catch (const StageFailure&) {
                rows.push_back(detail::failed_row(r, lam, "glasso-baseline", data_seed));
            }

            oracle_row.lambda = lam;
            rows.push_back(oracle_row);

            try {
                SequenceConfig seq(WeightSpec{cfg.kind, lam, cfg.gamma}, cfg.iters);
                seq.solver = cfg.solver;
                SequenceResult s = run_sequence_on_correlation(input.c_hat, input.w_hat, seq);
                rows.push_back(detail::scored_row(r, lam, seq_name, s.psi_stages.back(),
                                                  s.theta_final, cfg.iters, data_seed, out.model,
                                                  out.psi_star));
            } catch (const StageFailure&) {
                rows.push_back(detail::failed_row(r, lam, seq_name, data_seed));
            }
        }
        std::stable_sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
            if (a.lambda != b.lambda) return a.lambda < b.lambda;
            return a.method < b.method;
        });
    });

    for (int r = 0; r < cfg.reps; ++r) {
        const auto& rows = per_rep[static_cast<size_t>(r)];
        bool all_ok = true;
        for (const auto& row : rows) all_ok = all_ok && row.ok;
        if (all_ok) ++out.reps_ok;
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }

    // per-(lambda, method) means over successful rows
    std::vector<std::string> methods = {"glasso-baseline", "oracle", seq_name};
    std::sort(methods.begin(), methods.end());
    for (double lam : cfg.lambdas)
        for (const std::string& method : methods) {
            SummaryRow s;
            s.lambda = lam;
            s.method = method;
            for (const MetricRow& row : out.rows) {
                if (!row.ok || row.lambda != lam || row.method != method) continue;
                s.tpr += row.tpr;
                s.fpr += row.fpr;
                s.frob_err_theta += row.frob_err_theta;
                s.spec_err_theta += row.spec_err_theta;
                s.frob_err_psi += row.frob_err_psi;
                ++s.n_ok;
            }
            if (s.n_ok > 0) {
                s.tpr /= s.n_ok;
                s.fpr /= s.n_ok;
                s.frob_err_theta /= s.n_ok;
                s.spec_err_theta /= s.n_ok;
                s.frob_err_psi /= s.n_ok;
            }
            out.summary.push_back(s);
        }
    std::stable_sort(out.summary.begin(), out.summary.end(),
                     [](const SummaryRow& a, const SummaryRow& b) {
                         if (a.lambda != b.lambda) return a.lambda < b.lambda;
                         return a.method < b.method;
                     });
    return out;
}

struct TraceRow {
    int rep = 0;
    int stage = 0;  // 1-based
    double frob_err_psi = 0.0;
    double kkt_residual = 0.0;
    int active_edges = 0;
};

struct TraceOutput {
    ModelSpec model;
    SymMatrix psi_star;
    std::vector<TraceRow> rows;
    int reps_ok = 0;
    int reps_total = 0;
};

// per-stage distance to Psi* at a single lambda; lambda = 0 degenerates to
// one unpenalized stage (reweighting needs a positive threshold)
inline TraceOutput run_trace(const ExperimentConfig& cfg, double lambda) {
    ExperimentConfig checked = cfg;
    checked.lambdas = {lambda > 0.0 ? lambda : 1.0};
    validate(checked);
    if (!(lambda >= 0.0)) throw InvalidInput("trace: lambda must be >= 0");

    TraceOutput out;
    std::mt19937_64 model_rng(cfg.seed);
    out.model = build_model(gen_adjacency(cfg.family, cfg.d, cfg.k, model_rng), cfg.reading);
    out.model.family = cfg.family;
    out.model.k = cfg.k;
    out.model.seed = cfg.seed;
    out.psi_star = detail::psi_star_of(out.model);
    out.reps_total = cfg.reps;

    const bool unpenalized = !(lambda > 0.0);
    std::vector<std::vector<TraceRow>> per_rep(static_cast<size_t>(cfg.reps));
    std::vector<char> rep_ok(static_cast<size_t>(cfg.reps), 0);

    detail::run_replicates(cfg.reps, cfg.jobs, [&](int r) {
        const std::uint64_t data_seed = cfg.seed + 1 + static_cast<std::uint64_t>(r);
        try {
            DataMatrix x = sample_gaussian(out.model.sigma_true, cfg.n, data_seed);
            CorrelationScale input = detail::replicate_input(cfg, x);
            SequenceConfig run_cfg = unpenalized
                                         ? SequenceConfig(WeightSpec{WeightKind::Constant, 0.0, 2.0}, 1)
                                         : SequenceConfig(WeightSpec{cfg.kind, lambda, cfg.gamma},
                                                          cfg.iters);
            run_cfg.solver = cfg.solver;
            SequenceResult s = run_sequence_on_correlation(input.c_hat, input.w_hat, run_cfg);
            for (size_t stage = 0; stage < s.psi_stages.size(); ++stage) {
                TraceRow row;
                row.rep = r;
                row.stage = static_cast<int>(stage) + 1;
                row.frob_err_psi = norm_errors(s.psi_stages[stage], out.psi_star).frob;
                row.kkt_residual = s.per_stage_kkt[stage];
                row.active_edges = static_cast<int>(support(s.psi_stages[stage]).size());
                per_rep[static_cast<size_t>(r)].push_back(row);
            }
            rep_ok[static_cast<size_t>(r)] = 1;
        } catch (const StageFailure&) {
            per_rep[static_cast<size_t>(r)].clear();
        }
    });

    for (int r = 0; r < cfg.reps; ++r) {
        if (rep_ok[static_cast<size_t>(r)]) ++out.reps_ok;
        const auto& rows = per_rep[static_cast<size_t>(r)];
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }
    return out;
}

struct PatternRow {
    int k = 0;
    long s = 0;  // off-diagonal sparsity 2k
    double spectral = 0.0;
    double ratio = 0.0;
};

inline std::vector<PatternRow> pattern_table(int k_min, int k_max, int d) {
    if (k_min < 1 || k_min > k_max) throw InvalidInput("pattern: need 1 <= k_min <= k_max");
    if (k_max + 1 > d) throw InvalidInput("pattern: k_max + 1 must be <= d");
    std::vector<PatternRow> rows;
    rows.reserve(static_cast<size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k) {
        PatternRow row;
        row.k = k;
        row.s = 2L * k;
        row.spectral = spectral_norm(chain_pattern(k, d));
        row.ratio = row.spectral * row.spectral / static_cast<double>(row.s);
        rows.push_back(row);
    }
    return rows;
}

inline void write_metrics_csv(std::ostream& os, const std::vector<MetricRow>& rows) {
    os << "rep,lambda,method,tpr,fpr,frob_err_theta,spec_err_theta,frob_err_psi,"
          "stages_run,seed,status\n";
    for (const MetricRow& r : rows) {
        os << r.rep << ',' << format_g17(r.lambda) << ',' << r.method << ','
           << format_g17(r.tpr) << ',' << format_g17(r.fpr) << ','
           << format_g17(r.frob_err_theta) << ',' << format_g17(r.spec_err_theta) << ','
           << format_g17(r.frob_err_psi) << ',' << r.stages_run << ',' << r.seed << ','
           << (r.ok ? "ok" : "failed") << '\n';
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "lambda,method,mean_tpr,mean_fpr,mean_frob_err_theta,mean_spec_err_theta,"
          "mean_frob_err_psi,n_ok\n";
    for (const SummaryRow& r : rows) {
        os << format_g17(r.lambda) << ',' << r.method << ',' << format_g17(r.tpr) << ','
           << format_g17(r.fpr) << ',' << format_g17(r.frob_err_theta) << ','
           << format_g17(r.spec_err_theta) << ',' << format_g17(r.frob_err_psi) << ','
           << r.n_ok << '\n';
    }
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
    os << "rep,stage,frob_err_psi,kkt_residual,active_edges\n";
    for (const TraceRow& r : rows)
        os << r.rep << ',' << r.stage << ',' << format_g17(r.frob_err_psi) << ','
           << format_g17(r.kkt_residual) << ',' << r.active_edges << '\n';
}

inline void write_pattern_csv(std::ostream& os, const std::vector<PatternRow>& rows) {
    os << "k,s_k,spectral_norm,ratio\n";
    for (const PatternRow& r : rows)
        os << r.k << ',' << r.s << ',' << format_g17(r.spectral) << ',' << format_g17(r.ratio)
           << '\n';
}

}  // namespace seqglasso
