#pragma once

// Dense SPD kernels: Cholesky (with a relative pivot floor), log-determinant,
// inverse, and a cyclic Jacobi symmetric eigensolver.  These are deliberately
// plain O(d^3) loops -- problem sizes here are a few hundred at most and the
// exact failure semantics (pivot index, deterministic rotation order) matter
// more than speed.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "seqglasso/errors.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

struct CholeskyFactor {
    int dim = 0;
    std::vector<double> lower;  // row-major dim*dim, strictly upper part zero

    double operator()(int i, int j) const { return lower[static_cast<size_t>(i) * dim + j]; }
};

// `index` on failure is the 0-based pivot position k at which
// a_kk - sum_j L_kj^2 dropped to <= 1e-12 * max(diag(a)).
inline CholeskyFactor cholesky(const SymMatrix& a) {
    const int d = a.dim();
    if (d < 1) throw InvalidInput("cholesky: empty matrix");
    double max_diag = a(0, 0);
    for (int i = 1; i < d; ++i) max_diag = std::max(max_diag, a(i, i));
    const double floor = 1e-12 * max_diag;

    CholeskyFactor f;
    f.dim = d;
    f.lower.assign(static_cast<size_t>(d) * d, 0.0);
    auto L = [&](int i, int j) -> double& { return f.lower[static_cast<size_t>(i) * d + j]; };

    for (int k = 0; k < d; ++k) {
        double pivot = a(k, k);
        for (int j = 0; j < k; ++j) pivot -= L(k, j) * L(k, j);
        if (pivot <= floor)
            throw NotPositiveDefinite(k, "cholesky: pivot " + std::to_string(pivot) +
                                             " at index " + std::to_string(k));
        const double lkk = std::sqrt(pivot);
        L(k, k) = lkk;
        for (int i = k + 1; i < d; ++i) {
            double s = a(i, k);
            for (int j = 0; j < k; ++j) s -= L(i, j) * L(k, j);
            L(i, k) = s / lkk;
        }
    }
    return f;
}

inline double log_det(const SymMatrix& a) {
    CholeskyFactor f = cholesky(a);
    double s = 0.0;
    for (int i = 0; i < f.dim; ++i) s += std::log(f(i, i));
    return 2.0 * s;
}

// a^{-1} via L^{-T} L^{-1}; the result is symmetric by construction (upper
// triangle computed once and mirrored).
inline SymMatrix inverse_spd(const SymMatrix& a) {
    const CholeskyFactor f = cholesky(a);
    const int d = f.dim;

    // Linv = L^{-1}, lower triangular, by forward substitution.
    std::vector<double> linv(static_cast<size_t>(d) * d, 0.0);
    auto L = [&](int i, int j) { return f.lower[static_cast<size_t>(i) * d + j]; };
    auto Li = [&](int i, int j) -> double& { return linv[static_cast<size_t>(i) * d + j]; };
    for (int j = 0; j < d; ++j) {
        Li(j, j) = 1.0 / L(j, j);
        for (int i = j + 1; i < d; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s += L(i, k) * Li(k, j);
            Li(i, j) = -s / L(i, i);
        }
    }

    SymMatrix r(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int k = j; k < d; ++k) s += Li(k, i) * Li(k, j);
            r.set(i, j, s);
        }
    }
    return r;
}

struct SymEigen {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major dim*dim; column q pairs with values[q]
    int dim = 0;

    double vec(int i, int q) const { return vectors[static_cast<size_t>(i) * dim + q]; }
};

// Cyclic-by-row Jacobi.  Rotation order is fixed, so results are fully
// deterministic.  Vector accumulation can be skipped when only the spectrum
// is needed.
inline SymEigen sym_eigen(const SymMatrix& a, bool want_vectors = true) {
    const int d = a.dim();
    if (d < 1) throw InvalidInput("sym_eigen: empty matrix");

    std::vector<double> b(a.data());
    auto B = [&](int i, int j) -> double& { return b[static_cast<size_t>(i) * d + j]; };
    std::vector<double> v;
    if (want_vectors) {
        v.assign(static_cast<size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) v[static_cast<size_t>(i) * d + i] = 1.0;
    }
    auto V = [&](int i, int j) -> double& { return v[static_cast<size_t>(i) * d + j]; };

    double scale = 0.0;
    for (double x : b) scale = std::max(scale, std::abs(x));
    const double stop = (scale > 0.0) ? 1e-15 * scale : 0.0;

    const int max_sweeps = 64;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off = std::max(off, std::abs(B(p, q)));
        if (off <= stop) break;

        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = B(p, q);
                if (std::abs(apq) <= stop) continue;
                const double tau = (B(q, q) - B(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double bpp = B(p, p), bqq = B(q, q);
                B(p, p) = bpp - t * apq;
                B(q, q) = bqq + t * apq;
                B(p, q) = 0.0;
                B(q, p) = 0.0;
                for (int k = 0; k < d; ++k) {
                    if (k == p || k == q) continue;
                    const double bkp = B(k, p), bkq = B(k, q);
                    B(k, p) = c * bkp - s * bkq;
                    B(p, k) = B(k, p);
                    B(k, q) = s * bkp + c * bkq;
                    B(q, k) = B(k, q);
                }
                if (want_vectors) {
                    for (int k = 0; k < d; ++k) {
                        const double vkp = V(k, p), vkq = V(k, q);
                        V(k, p) = c * vkp - s * vkq;
                        V(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw NotConverged(max_sweeps, 0.0, false, "sym_eigen: Jacobi did not converge");

    std::vector<int> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return B(x, x) < B(y, y); });

    SymEigen e;
    e.dim = d;
    e.values.resize(static_cast<size_t>(d));
    for (int q = 0; q < d; ++q) e.values[static_cast<size_t>(q)] = B(order[static_cast<size_t>(q)], order[static_cast<size_t>(q)]);
    if (want_vectors) {
        e.vectors.assign(static_cast<size_t>(d) * d, 0.0);
        for (int q = 0; q < d; ++q)
            for (int i = 0; i < d; ++i)
                e.vectors[static_cast<size_t>(i) * d + q] = V(i, order[static_cast<size_t>(q)]);
    }
    return e;
}

inline double spectral_norm(const SymMatrix& a) {
    SymEigen e = sym_eigen(a, /*want_vectors=*/false);
    return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

inline double min_eigenvalue(const SymMatrix& a) {
    return sym_eigen(a, /*want_vectors=*/false).values.front();
}

}  // namespace seqglasso
