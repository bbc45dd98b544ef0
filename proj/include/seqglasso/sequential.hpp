#pragma once

// The full estimation pipeline: rescale the covariance to a correlation
// matrix, run T adaptively reweighted graphical-lasso stages (warm-started,
// each certified by its KKT residual), and scale the last stage back to the
// concentration matrix.

#include <cmath>
#include <string>
#include <vector>

#include "seqglasso/edge_set.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/glasso.hpp"
#include "seqglasso/penalty.hpp"
#include "seqglasso/spd.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

struct SequenceConfig {
    WeightSpec weight;
    int iters = 4;  // number of reweighted stages T
    SolverOptions solver;

    explicit SequenceConfig(const WeightSpec& w) : weight(w) {}
    SequenceConfig(const WeightSpec& w, int t) : weight(w), iters(t) {}
};

struct CorrelationScale {
    SymMatrix c_hat;
    std::vector<double> w_hat;  // marginal standard deviations
};

inline CorrelationScale correlation_step(const SymMatrix& sigma_hat) {
    const int d = sigma_hat.dim();
    CorrelationScale out;
    out.w_hat.resize(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        if (!(sigma_hat(i, i) > 0.0))
            throw InvalidInput("correlation_step: nonpositive variance at " + std::to_string(i));
        out.w_hat[static_cast<size_t>(i)] = std::sqrt(sigma_hat(i, i));
    }
    out.c_hat = SymMatrix(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j)
            out.c_hat.set(i, j, sigma_hat(i, j) /
                                    (out.w_hat[static_cast<size_t>(i)] * out.w_hat[static_cast<size_t>(j)]));
        out.c_hat.set(i, i, 1.0);
    }
    return out;
}

struct SequenceResult {
    std::vector<SymMatrix> psi_stages;       // Psi^(1..T), correlation scale
    std::vector<PenaltyMatrix> penalties;    // Lambda^(0..T-1)
    SymMatrix theta_final;                   // diag(1/w) Psi^(T) diag(1/w)
    std::vector<double> w_hat;
    std::vector<double> per_stage_kkt;
    std::vector<int> per_stage_sweeps;
    std::vector<double> per_stage_ridge;
    // support churn between consecutive stages (diagnostic only; contraction
    // is proved in norm, not in support)
    std::vector<EdgeSet> support_gained;
    std::vector<EdgeSet> support_lost;
};

inline constexpr double kSupportTol = 1e-8;

// Core loop on an already-normalized correlation matrix.  w_hat is carried
// through to the final rescaling only.
inline SequenceResult run_sequence_on_correlation(const SymMatrix& c_hat,
                                                  const std::vector<double>& w_hat,
                                                  const SequenceConfig& cfg) {
    const int d = c_hat.dim();
    if (cfg.iters < 1) throw InvalidInput("run_sequence: iters must be >= 1");
    if (w_hat.size() != static_cast<size_t>(d)) throw DimMismatch("run_sequence: w_hat length");

    SequenceResult out;
    out.w_hat = w_hat;

    for (int stage = 1; stage <= cfg.iters; ++stage) {
        PenaltyMatrix lam = (stage == 1)
                                ? PenaltyMatrix::uniform(d, cfg.weight.lambda)
                                : build_penalty_matrix(cfg.weight, out.psi_stages.back());
        const SymMatrix* warm = out.psi_stages.empty() ? nullptr : &out.psi_stages.back();
        GlassoResult r;
        try {
            r = solve(c_hat, lam, cfg.solver, warm);
        } catch (const NotConverged& e) {
            throw StageFailure(stage, "stage " + std::to_string(stage) + ": " + e.what());
        } catch (const NotPositiveDefinite& e) {
            throw StageFailure(stage, "stage " + std::to_string(stage) + ": " + e.what());
        }
        out.penalties.push_back(lam);
        out.psi_stages.push_back(r.psi);
        out.per_stage_kkt.push_back(r.kkt_residual);
        out.per_stage_sweeps.push_back(r.sweeps);
        out.per_stage_ridge.push_back(r.ridge_applied);
    }

    for (size_t l = 1; l < out.psi_stages.size(); ++l) {
        EdgeSet prev = support_of(out.psi_stages[l - 1], kSupportTol);
        EdgeSet cur = support_of(out.psi_stages[l], kSupportTol);
        EdgeSet gained, lost;
        for (const auto& e : cur)
            if (!prev.contains(e.first, e.second)) gained.add(e.first, e.second);
        for (const auto& e : prev)
            if (!cur.contains(e.first, e.second)) lost.add(e.first, e.second);
        out.support_gained.push_back(gained);
        out.support_lost.push_back(lost);
    }

    out.theta_final = SymMatrix(d);
    const SymMatrix& last = out.psi_stages.back();
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            out.theta_final.set(i, j, last(i, j) / (w_hat[static_cast<size_t>(i)] *
                                                    w_hat[static_cast<size_t>(j)]));
    return out;
}

inline SequenceResult run_sequence(const SymMatrix& sigma_hat, const SequenceConfig& cfg) {
    CorrelationScale cs = correlation_step(sigma_hat);
    return run_sequence_on_correlation(cs.c_hat, cs.w_hat, cfg);
}

// Frobenius distance of every stage to a reference (usually the population
// Psi*); diagnostic only.
inline std::vector<double> contraction_trace(const SequenceResult& res, const SymMatrix& psi_true) {
    std::vector<double> trace;
    trace.reserve(res.psi_stages.size());
    for (const SymMatrix& psi : res.psi_stages) {
        require_same_dim(psi, psi_true, "contraction_trace");
        trace.push_back(frobenius_norm(subtract(psi, psi_true)));
    }
    return trace;
}

// ceil(log log d): the theoretical stage schedule; the practical default is 4.
inline int suggested_stage_count(int d) {
    if (d < 3) return 1;
    return std::max(1, static_cast<int>(std::ceil(std::log(std::log(static_cast<double>(d))))));
}

}  // namespace seqglasso
