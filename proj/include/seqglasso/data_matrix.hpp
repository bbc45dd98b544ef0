#pragma once

#include <cmath>
#include <vector>

#include "seqglasso/errors.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

// Dense n x d observation matrix, row-major.  Construction only checks the
// shape; estimation entry points additionally require n,d >= 2 and finite
// values (see validate_for_estimation) so that single-row synthetic draws
// remain representable.
struct DataMatrix {
    int n = 0;
    int d = 0;
    std::vector<double> values;  // n*d

    DataMatrix() = default;
    DataMatrix(int n_, int d_) : n(n_), d(d_), values(static_cast<size_t>(n_) * d_, 0.0) {
        if (n < 1 || d < 1) throw InvalidInput("DataMatrix: empty shape");
    }

    double operator()(int i, int j) const { return values[static_cast<size_t>(i) * d + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * d + j]; }
};

inline void validate_for_estimation(const DataMatrix& x) {
    if (x.n < 2 || x.d < 2) throw InvalidInput("data matrix: need at least 2 rows and 2 columns");
    for (double v : x.values)
        if (!std::isfinite(v)) throw InvalidInput("data matrix: non-finite value");
}

// centered second-moment estimate: (1/n) sum (x_i - mean)(x_i - mean)^T
inline SymMatrix sample_covariance(const DataMatrix& x) {
    validate_for_estimation(x);
    std::vector<double> mean(static_cast<size_t>(x.d), 0.0);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.d; ++j) mean[static_cast<size_t>(j)] += x(i, j);
    for (auto& m : mean) m /= x.n;

    SymMatrix s(x.d);
    for (int a = 0; a < x.d; ++a)
        for (int b = a; b < x.d; ++b) {
            double acc = 0.0;
            for (int i = 0; i < x.n; ++i)
                acc += (x(i, a) - mean[static_cast<size_t>(a)]) * (x(i, b) - mean[static_cast<size_t>(b)]);
            s.set(a, b, acc / x.n);
        }
    return s;
}

}  // namespace seqglasso
