#pragma once

// Rank-based (nonparanormal) front end: Kendall's tau, the sine transform,
// a PSD repair for the resulting pseudo-correlation, and the full pipeline
// feeding the reweighting sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seqglasso/data_matrix.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/sequential.hpp"
#include "seqglasso/spd.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

namespace detail {

// concordant-minus-discordant pair count for two columns, ties contributing
// zero; exact integer arithmetic so any algorithm computing the same count
// must agree bit-for-bit after the single final division
inline std::int64_t tau_numerator_naive(const DataMatrix& x, int j, int k) {
    std::int64_t num = 0;
    for (int a = 0; a < x.n; ++a)
        for (int b = a + 1; b < x.n; ++b) {
            // sign of each difference separately: the product form could
            // underflow to zero and mislabel a genuine pair as a tie
            const double dj = x(a, j) - x(b, j);
            const double dk = x(a, k) - x(b, k);
            const int sj = (dj > 0.0) - (dj < 0.0);
            const int sk = (dk > 0.0) - (dk < 0.0);
            num += sj * sk;
        }
    return num;
}

// Knight's O(n log n) count: sort by (col j, then col k), then discordant
// pairs are exactly the strict inversions of the col-k sequence.  Tie groups
// are handled by the inclusion-exclusion n0 - n1 - n2 + n3 = P + Q.
inline std::int64_t tau_numerator_fast(const DataMatrix& x, int j, int k) {
    const int n = x.n;
    std::vector<std::pair<double, double>> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = {x(i, j), x(i, k)};
    std::sort(v.begin(), v.end());

    auto pairs_of = [](std::int64_t t) { return t * (t - 1) / 2; };
    const std::int64_t n0 = pairs_of(n);

    std::int64_t n1 = 0;  // pairs tied in column j
    std::int64_t n3 = 0;  // pairs tied in both
    for (int i = 0; i < n;) {
        int r = i;
        while (r < n && v[static_cast<size_t>(r)].first == v[static_cast<size_t>(i)].first) ++r;
        n1 += pairs_of(r - i);
        for (int a = i; a < r;) {
            int b = a;
            while (b < r && v[static_cast<size_t>(b)].second == v[static_cast<size_t>(a)].second)
                ++b;
            n3 += pairs_of(b - a);
            a = b;
        }
        i = r;
    }

    // merge sort the col-k keys counting strict inversions; the sort above
    // already ordered ties in col j by col k, so within-group pairs add none
    std::vector<double> key(static_cast<size_t>(n)), tmp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) key[static_cast<size_t>(i)] = v[static_cast<size_t>(i)].second;
    std::int64_t inversions = 0;
    for (int width = 1; width < n; width *= 2) {
        for (int lo = 0; lo + width < n; lo += 2 * width) {
            const int mid = lo + width;
            const int hi = std::min(lo + 2 * width, n);
            int a = lo, b = mid, t = lo;
            while (a < mid && b < hi) {
                if (key[static_cast<size_t>(b)] < key[static_cast<size_t>(a)]) {
                    inversions += mid - a;
                    tmp[static_cast<size_t>(t++)] = key[static_cast<size_t>(b++)];
                } else {
                    tmp[static_cast<size_t>(t++)] = key[static_cast<size_t>(a++)];
                }
            }
            while (a < mid) tmp[static_cast<size_t>(t++)] = key[static_cast<size_t>(a++)];
            while (b < hi) tmp[static_cast<size_t>(t++)] = key[static_cast<size_t>(b++)];
            std::copy(tmp.begin() + lo, tmp.begin() + hi, key.begin() + lo);
        }
    }

    std::int64_t n2 = 0;  // pairs tied in column k (key is now fully sorted)
    for (int i = 0; i < n;) {
        int r = i;
        while (r < n && key[static_cast<size_t>(r)] == key[static_cast<size_t>(i)]) ++r;
        n2 += pairs_of(r - i);
        i = r;
    }

    return (n0 - n1 - n2 + n3) - 2 * inversions;
}

template <typename Numerator>
SymMatrix kendall_with(const DataMatrix& x, Numerator numerator) {
    validate_for_estimation(x);
    const std::int64_t total = static_cast<std::int64_t>(x.n) * (x.n - 1) / 2;
    SymMatrix tau(x.d);
    for (int j = 0; j < x.d; ++j) {
        tau.set(j, j, 1.0);
        for (int k = j + 1; k < x.d; ++k)
            tau.set(j, k, static_cast<double>(numerator(x, j, k)) / static_cast<double>(total));
    }
    return tau;
}

}  // namespace detail

// tau_jk = (2/(n(n-1))) sum_{a<b} sign((x_aj - x_bj)(x_ak - x_bk)),
// ties contributing zero; diagonal exactly 1.  Reference O(n^2 d^2) form.
inline SymMatrix kendall_tau_matrix(const DataMatrix& x) {
    return detail::kendall_with(x, detail::tau_numerator_naive);
}

// same statistic via Knight's algorithm; agrees with the reference exactly
// because both reduce to the same integer pair count
inline SymMatrix kendall_tau_matrix_fast(const DataMatrix& x) {
    return detail::kendall_with(x, detail::tau_numerator_fast);
}

// off-diagonal sin(tau * pi/2), diagonal exactly 1
inline SymMatrix sine_transform(const SymMatrix& tau) {
    const int d = tau.dim();
    SymMatrix s(d);
    for (int j = 0; j < d; ++j) {
        s.set(j, j, 1.0);
        for (int k = j + 1; k < d; ++k) {
            const double t = tau(j, k);
            if (std::abs(t) > 1.0 + 1e-12)
                throw InvalidInput("sine_transform: entry outside [-1, 1]");
            s.set(j, k, std::sin(t * 1.5707963267948966));
        }
    }
    return s;
}

// Clip eigenvalues below `floor`, reconstruct, and rescale the diagonal back
// to exactly one.  A matrix already satisfying the floor is returned
// unchanged, bit for bit, so the common well-conditioned path is a no-op.
inline SymMatrix psd_repair(const SymMatrix& s, double floor = 1e-3) {
    if (floor <= 0.0) throw InvalidInput("psd_repair: floor must be positive");
    if (min_eigenvalue(s) >= floor) return s;

    const int d = s.dim();
    SymEigen eig = sym_eigen(s, true);
    for (double& v : eig.values) v = std::max(v, floor);

    SymMatrix a(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double acc = 0.0;
            for (int q = 0; q < d; ++q) acc += eig.values[static_cast<size_t>(q)] * eig.vec(i, q) * eig.vec(j, q);
            a.set(i, j, acc);
        }

    std::vector<double> scale(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) scale[static_cast<size_t>(i)] = std::sqrt(a(i, i));
    SymMatrix out(d);
    for (int i = 0; i < d; ++i) {
        out.set(i, i, 1.0);
        for (int j = i + 1; j < d; ++j)
            out.set(i, j, a(i, j) / (scale[static_cast<size_t>(i)] * scale[static_cast<size_t>(j)]));
    }
    return out;
}

// Full rank-based pipeline: tau -> sine -> repair -> reweighting sequence on
// the pseudo-correlation.  The target here is the inverse correlation, so no
// marginal-scale rescaling applies (unit scales).
inline SequenceResult estimate_npn(const DataMatrix& x, const SequenceConfig& cfg,
                                   double repair_floor = 1e-3) {
    SymMatrix c = psd_repair(sine_transform(kendall_tau_matrix_fast(x)), repair_floor);
    return run_sequence_on_correlation(c, std::vector<double>(static_cast<size_t>(x.d), 1.0), cfg);
}

}  // namespace seqglasso
