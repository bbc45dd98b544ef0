#pragma once

// Weighted graphical lasso:
//     minimize  <Psi, C> - log det(Psi) + sum_{i != j} lam_ij |psi_ij|
// over positive definite Psi, by primal block coordinate descent: cycle over
// columns, each column solving its l1-penalized quadratic subproblem with
// cyclic coordinate descent.  Working on the primal (rather than the usual
// dual covariance updates) keeps the recorded objective monotone and lets the
// KKT residual certify the answer.

#include <cmath>
#include <string>
#include <vector>

#include "seqglasso/edge_set.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/penalty.hpp"
#include "seqglasso/spd.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

struct SolverOptions {
    double kkt_tol = 1e-6;
    int max_sweeps = 500;
    double inner_tol = 1e-9;
    double ridge_on_indefinite = 1e-3;
};

// entries with |psi_ij| <= this are treated as structural zeros in the KKT
// subgradient rule
inline constexpr double kActiveEps = 1e-10;

struct GlassoResult {
    SymMatrix psi;    // estimate, PD
    SymMatrix sigma;  // psi^{-1}, the working covariance
    double objective = 0.0;
    double kkt_residual = 0.0;
    int sweeps = 0;
    bool converged = false;
    double ridge_applied = 0.0;  // nonzero when the input needed the PD repair
    std::vector<double> objective_trace;  // objective at init and after each sweep
};

inline double objective(const SymMatrix& psi, const SymMatrix& c, const PenaltyMatrix& lam) {
    require_same_dim(psi, c, "objective");
    if (psi.dim() != lam.dim()) throw DimMismatch("objective: penalty dim");
    double pen = 0.0;
    for (int i = 0; i < psi.dim(); ++i)
        for (int j = i + 1; j < psi.dim(); ++j) pen += 2.0 * lam(i, j) * std::abs(psi(i, j));
    return inner(psi, c) - log_det(psi) + pen;
}

namespace detail {

// KKT residual given a precomputed exact inverse of psi.  `mask`, when
// non-null, marks structural zeros (1 = entry pinned to zero, exempt from the
// subgradient rule) for the support-restricted oracle problem.
inline double kkt_residual_with(const SymMatrix& psi, const SymMatrix& c, const PenaltyMatrix& lam,
                                const SymMatrix& psi_inv, const std::vector<char>* mask) {
    const int d = psi.dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(c(i, i) - psi_inv(i, i)));
        for (int j = i + 1; j < d; ++j) {
            if (mask && (*mask)[static_cast<size_t>(i) * d + j]) continue;
            const double g = c(i, j) - psi_inv(i, j);
            const double p = psi(i, j);
            double r;
            if (std::abs(p) > kActiveEps)
                r = std::abs(g + lam(i, j) * (p > 0 ? 1.0 : -1.0));
            else
                r = std::max(0.0, std::abs(g) - lam(i, j));
            worst = std::max(worst, r);
        }
    }
    return worst;
}

struct SolveProblem {
    const SymMatrix& c;
    const PenaltyMatrix& lam;
    const SolverOptions& opts;
    const std::vector<char>* mask = nullptr;  // structural zeros, or null
    const SymMatrix* warm = nullptr;
};

inline GlassoResult solve_impl(const SolveProblem& pb) {
    const SolverOptions& opts = pb.opts;
    if (!(opts.kkt_tol > 0.0) || opts.max_sweeps < 1 || !(opts.inner_tol > 0.0) ||
        !(opts.ridge_on_indefinite >= 0.0))
        throw InvalidInput("SolverOptions: bad field");

    const int d = pb.c.dim();
    if (d < 1) throw InvalidInput("solve: empty input");
    if (pb.lam.dim() != d) throw DimMismatch("solve: penalty dim");
    for (int i = 0; i < d; ++i)
        if (!(pb.c(i, i) > 0.0)) throw InvalidInput("solve: nonpositive diagonal at " + std::to_string(i));

    GlassoResult res;

    // PD repair for plug-in inputs (e.g. the raw Kendall-tau sine transform):
    // ridge then pull the diagonal back to 1.
    SymMatrix c = pb.c;
    bool pd = true;
    try {
        cholesky(c);
    } catch (const NotPositiveDefinite&) {
        pd = false;
    }
    if (!pd) {
        SymMatrix shifted(d);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                shifted.set(i, j, c(i, j) + (i == j ? opts.ridge_on_indefinite : 0.0));
        std::vector<double> rs(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) rs[static_cast<size_t>(i)] = 1.0 / std::sqrt(shifted(i, i));
        SymMatrix fixed(d);
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j)
                fixed.set(i, j, shifted(i, j) * rs[static_cast<size_t>(i)] * rs[static_cast<size_t>(j)]);
            fixed.set(i, i, 1.0);
        }
        cholesky(fixed);  // still not PD -> give up (propagates NotPositiveDefinite)
        c = fixed;
        res.ridge_applied = opts.ridge_on_indefinite;
    }

    // init: warm start if given, else diag(1/c_ii)
    SymMatrix psi(d);
    if (pb.warm) {
        require_same_dim(*pb.warm, c, "solve warm start");
        psi = *pb.warm;
    } else {
        for (int i = 0; i < d; ++i) psi.set(i, i, 1.0 / c(i, i));
    }

    SymMatrix sigma = inverse_spd(psi);
    double obj = objective(psi, c, pb.lam);
    res.objective_trace.push_back(obj);

    double resid = kkt_residual_with(psi, c, pb.lam, sigma, pb.mask);
    if (resid <= opts.kkt_tol) {
        res.psi = psi;
        res.sigma = sigma;
        res.objective = obj;
        res.kkt_residual = resid;
        res.sweeps = 0;
        res.converged = true;
        return res;
    }

    // raw buffers for the column updates
    std::vector<double> w(sigma.data());  // running inverse, refreshed each sweep
    std::vector<double> p(psi.data());
    auto W = [&](int i, int j) -> double& { return w[static_cast<size_t>(i) * d + j]; };
    auto P = [&](int i, int j) -> double& { return p[static_cast<size_t>(i) * d + j]; };

    const int m = d - 1;
    std::vector<int> others(static_cast<size_t>(std::max(m, 0)));
    std::vector<double> p11inv(static_cast<size_t>(m) * m), q(static_cast<size_t>(m) * m);
    std::vector<double> beta(static_cast<size_t>(m)), grad(static_cast<size_t>(m)),
        lcol(static_cast<size_t>(m)), ccol(static_cast<size_t>(m));
    std::vector<char> pinned(static_cast<size_t>(m));

    double prev_obj = obj;
    double prev_resid = resid;
    int sweep = 0;
    bool converged = false;
    const int inner_cap = 1000;

    for (sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        // refresh the running inverse to stop drift across column updates
        {
            SymMatrix cur(d, p);
            SymMatrix inv = inverse_spd(cur);
            w = inv.data();
        }

        for (int j = 0; j < d; ++j) {
            for (int k = 0, t = 0; k < d; ++k)
                if (k != j) others[static_cast<size_t>(t++)] = k;

            const double cjj = c(j, j);
            const double wjj = W(j, j);
            for (int a = 0; a < m; ++a) {
                const int oa = others[static_cast<size_t>(a)];
                const double waj = W(oa, j);
                for (int b = a; b < m; ++b) {
                    const int ob = others[static_cast<size_t>(b)];
                    const double v = W(oa, ob) - waj * W(ob, j) / wjj;
                    p11inv[static_cast<size_t>(a) * m + b] = v;
                    p11inv[static_cast<size_t>(b) * m + a] = v;
                }
                beta[static_cast<size_t>(a)] = P(oa, j);
                ccol[static_cast<size_t>(a)] = c(oa, j);
                lcol[static_cast<size_t>(a)] = pb.lam(oa, j);
                pinned[static_cast<size_t>(a)] =
                    pb.mask ? (*pb.mask)[static_cast<size_t>(std::min(oa, j)) * d + std::max(oa, j)]
                            : char(0);
            }
            for (size_t t = 0; t < q.size(); ++t) q[t] = cjj * p11inv[t];

            // grad = Q beta
            for (int a = 0; a < m; ++a) {
                double s = 0.0;
                for (int b = 0; b < m; ++b) s += q[static_cast<size_t>(a) * m + b] * beta[static_cast<size_t>(b)];
                grad[static_cast<size_t>(a)] = s;
            }

            // inner lasso CD over the column
            for (int it = 0; it < inner_cap; ++it) {
                double max_delta = 0.0;
                for (int a = 0; a < m; ++a) {
                    if (pinned[static_cast<size_t>(a)]) continue;
                    const double qaa = q[static_cast<size_t>(a) * m + a];
                    const double z = ccol[static_cast<size_t>(a)] + grad[static_cast<size_t>(a)] -
                                     qaa * beta[static_cast<size_t>(a)];
                    const double l = lcol[static_cast<size_t>(a)];
                    double bnew;
                    if (z > l)
                        bnew = (l - z) / qaa;
                    else if (z < -l)
                        bnew = (-l - z) / qaa;
                    else
                        bnew = 0.0;
                    const double delta = bnew - beta[static_cast<size_t>(a)];
                    if (delta != 0.0) {
                        beta[static_cast<size_t>(a)] = bnew;
                        for (int b = 0; b < m; ++b)
                            grad[static_cast<size_t>(b)] += q[static_cast<size_t>(b) * m + a] * delta;
                        max_delta = std::max(max_delta, std::abs(delta));
                    }
                }
                if (max_delta <= opts.inner_tol) break;
            }

            // write the column back; diagonal from the optimal Schur complement
            double quad = 0.0;
            for (int a = 0; a < m; ++a) quad += beta[static_cast<size_t>(a)] * grad[static_cast<size_t>(a)];
            const double pjj = 1.0 / cjj + quad / cjj;
            for (int a = 0; a < m; ++a) {
                const int oa = others[static_cast<size_t>(a)];
                P(oa, j) = beta[static_cast<size_t>(a)];
                P(j, oa) = beta[static_cast<size_t>(a)];
            }
            P(j, j) = pjj;

            // restore W = Psi^{-1} for the updated column
            W(j, j) = cjj;
            for (int a = 0; a < m; ++a) {
                const int oa = others[static_cast<size_t>(a)];
                W(oa, j) = -grad[static_cast<size_t>(a)];
                W(j, oa) = -grad[static_cast<size_t>(a)];
                for (int b = a; b < m; ++b) {
                    const int ob = others[static_cast<size_t>(b)];
                    const double v = p11inv[static_cast<size_t>(a) * m + b] +
                                     grad[static_cast<size_t>(a)] * grad[static_cast<size_t>(b)] / cjj;
                    W(oa, ob) = v;
                    W(ob, oa) = v;
                }
            }
        }

        psi = SymMatrix(d, p);
        sigma = inverse_spd(psi);
        obj = objective(psi, c, pb.lam);
        res.objective_trace.push_back(obj);
        resid = kkt_residual_with(psi, c, pb.lam, sigma, pb.mask);
        if (resid <= opts.kkt_tol) {
            converged = true;
            break;
        }
        // Stall: the objective has flatlined *and* the residual is no longer
        // improving.  Near convergence the objective gap shrinks like the
        // square of the KKT residual, so a flat objective alone is normal on
        // the last couple of sweeps; a frozen residual is not.
        if (std::abs(prev_obj - obj) <= 1e-10 * std::max(1.0, std::abs(obj)) &&
            resid >= 0.999 * prev_resid)
            throw NotConverged(sweep, resid, true,
                               "solve: objective stalled at KKT residual " + std::to_string(resid));
        prev_obj = obj;
        prev_resid = resid;
    }

    if (!converged)
        throw NotConverged(opts.max_sweeps, resid,
                           false, "solve: sweep budget exhausted at KKT residual " + std::to_string(resid));

    res.psi = psi;
    res.sigma = sigma;
    res.objective = obj;
    res.kkt_residual = resid;
    res.sweeps = sweep;
    res.converged = true;
    return res;
}

}  // namespace detail

inline double kkt_residual(const SymMatrix& psi, const SymMatrix& c, const PenaltyMatrix& lam) {
    require_same_dim(psi, c, "kkt_residual");
    if (psi.dim() != lam.dim()) throw DimMismatch("kkt_residual: penalty dim");
    return detail::kkt_residual_with(psi, c, lam, inverse_spd(psi), nullptr);
}

inline GlassoResult solve(const SymMatrix& c, const PenaltyMatrix& lam,
                          const SolverOptions& opts = {}, const SymMatrix* warm_start = nullptr) {
    detail::SolveProblem pb{c, lam, opts, nullptr, warm_start};
    return detail::solve_impl(pb);
}

// Support-restricted MLE: no penalty, off-support entries pinned to exact
// zero, KKT certified on the free coordinates only.
inline GlassoResult solve_oracle(const SymMatrix& c, const EdgeSet& support,
                                 const SolverOptions& opts = {}) {
    const int d = c.dim();
    std::vector<char> mask(static_cast<size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (!support.contains(i, j)) {
                mask[static_cast<size_t>(i) * d + j] = 1;
                mask[static_cast<size_t>(j) * d + i] = 1;
            }
    for (const auto& e : support)
        if (e.second >= d) throw InvalidInput("solve_oracle: edge index out of range");

    PenaltyMatrix lam = PenaltyMatrix::zero(d);
    detail::SolveProblem pb{c, lam, opts, &mask, nullptr};
    return detail::solve_impl(pb);
}

}  // namespace seqglasso
