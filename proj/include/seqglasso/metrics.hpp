#pragma once

// Evaluation helpers: support recovery rates, norm errors, sparsity-pattern
// matrices and their spectral ratio, node degrees.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "seqglasso/edge_set.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/spd.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

// off-diagonal support at a threshold; the solver writes exact zeros for
// inactive entries, so the default just guards against dust
inline EdgeSet support(const SymMatrix& psi, double tol = 1e-8) { return support_of(psi, tol); }

struct RecoveryRates {
    double tpr = 0.0;
    double fpr = 0.0;
};

// tpr = |est ∩ truth| / |truth| (1 when truth is empty); fpr = false
// positives over the d(d-1)/2 - |truth| true non-edges (0 when none exist)
inline RecoveryRates tpr_fpr(const EdgeSet& est, const EdgeSet& truth, int d) {
    if (d < 1) throw InvalidInput("tpr_fpr: d must be >= 1");
    std::size_t hits = 0;
    for (const auto& e : est)
        if (truth.contains(e.first, e.second)) ++hits;

    RecoveryRates r;
    r.tpr = truth.size() == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
    const auto total_pairs = static_cast<std::size_t>(d) * (d - 1) / 2;
    const std::size_t non_edges = total_pairs - truth.size();
    const std::size_t false_pos = est.size() - hits;
    r.fpr = non_edges == 0 ? 0.0 : static_cast<double>(false_pos) / static_cast<double>(non_edges);
    return r;
}

// 0/1 indicator of |a_ij| > tol, diagonal included
inline SymMatrix sparsity_pattern(const SymMatrix& a, double tol = 1e-8) {
    if (tol < 0.0) throw InvalidInput("sparsity_pattern: tol must be >= 0");
    const int d = a.dim();
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            if (std::abs(a(i, j)) > tol) m.set(i, j, 1.0);
    return m;
}

// squared spectral norm of a pattern matrix over its off-diagonal sparsity
inline double pattern_ratio(const SymMatrix& m, long s) {
    if (s <= 0) throw InvalidInput("pattern_ratio: s must be positive");
    const double nrm = spectral_norm(m);
    return nrm * nrm / static_cast<double>(s);
}

// chain pattern: ones on the tridiagonal of the leading (k+1)x(k+1) block,
// identity on the remaining isolated vertices
inline SymMatrix chain_pattern(int k, int d) {
    if (k < 1 || k + 1 > d) throw InvalidInput("chain_pattern: need 1 <= k <= d-1");
    SymMatrix m = SymMatrix::identity(d);
    for (int i = 0; i < k; ++i) m.set(i, i + 1, 1.0);
    return m;
}

struct NormErrors {
    double frob = 0.0;
    double spec = 0.0;
};

inline NormErrors norm_errors(const SymMatrix& est, const SymMatrix& truth) {
    require_same_dim(est, truth, "norm_errors");
    SymMatrix diff = subtract(est, truth);
    return {frobenius_norm(diff), spectral_norm(diff)};
}

inline int max_degree(const EdgeSet& edges, int d) {
    if (d < 0) throw InvalidInput("max_degree: d must be >= 0");
    std::vector<int> deg(static_cast<size_t>(d), 0);
    for (const auto& e : edges) {
        ++deg[static_cast<size_t>(e.first)];
        ++deg[static_cast<size_t>(e.second)];
    }
    int m = 0;
    for (int v : deg) m = std::max(m, v);
    return m;
}

}  // namespace seqglasso
