#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "seqglasso/errors.hpp"

namespace seqglasso {

// Dense symmetric matrix, row-major, with symmetry maintained as a hard
// invariant: (i,j) and (j,i) always hold the same bits.  Construction from
// raw data symmetrizes by averaging; all mutation goes through set(), which
// writes both triangles.
class SymMatrix {
  public:
    SymMatrix() : dim_(0) {}

    explicit SymMatrix(int dim) : dim_(check_dim(dim)), v_(static_cast<size_t>(dim) * dim, 0.0) {}

    // Row-major dim*dim buffer; mirrored entries are averaged.
    SymMatrix(int dim, const std::vector<double>& raw) : SymMatrix(dim) {
        if (raw.size() != v_.size())
            throw DimMismatch("SymMatrix: raw buffer size does not match dim*dim");
        for (int i = 0; i < dim_; ++i) {
            v_[idx(i, i)] = raw[idx(i, i)];
            for (int j = i + 1; j < dim_; ++j) {
                double m = 0.5 * (raw[idx(i, j)] + raw[idx(j, i)]);
                v_[idx(i, j)] = m;
                v_[idx(j, i)] = m;
            }
        }
    }

    static SymMatrix identity(int dim) {
        SymMatrix a(dim);
        for (int i = 0; i < dim; ++i) a.v_[a.idx(i, i)] = 1.0;
        return a;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix a(static_cast<int>(d.size()));
        for (int i = 0; i < a.dim_; ++i) a.v_[a.idx(i, i)] = d[static_cast<size_t>(i)];
        return a;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return v_[idx(i, j)]; }

    void set(int i, int j, double value) {
        v_[idx(i, j)] = value;
        v_[idx(j, i)] = value;
    }

    const std::vector<double>& data() const { return v_; }

    bool same_bits(const SymMatrix& other) const {
        return dim_ == other.dim_ && v_ == other.v_;
    }

  private:
    static int check_dim(int dim) {
        if (dim < 0) throw InvalidInput("SymMatrix: negative dimension");
        return dim;
    }
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * dim_ + j; }

    int dim_;
    std::vector<double> v_;
};

inline void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* where) {
    if (a.dim() != b.dim()) throw DimMismatch(std::string(where) + ": dimension mismatch");
}

inline double max_abs(const SymMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

inline double frobenius_norm(const SymMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

inline SymMatrix subtract(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b, "subtract");
    SymMatrix out(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j) out.set(i, j, a(i, j) - b(i, j));
    return out;
}

// <a, b> = sum_ij a_ij * b_ij
inline double inner(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b, "inner");
    double s = 0.0;
    for (size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
    return s;
}

}  // namespace seqglasso
