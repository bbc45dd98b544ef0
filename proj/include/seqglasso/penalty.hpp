#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "seqglasso/errors.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

enum class WeightKind { Scad, Mcp, Constant };

inline const char* weight_kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::Scad: return "scad";
        case WeightKind::Mcp: return "mcp";
        default: return "constant";
    }
}

// lambda is the tuning parameter, gamma the concavity knob (ignored for the
// constant/lasso weight).
struct WeightSpec {
    WeightKind kind;
    double lambda;
    double gamma;

    // lambda = 0 is admitted only for the constant kind, as the unpenalized
    // limit (used by lambda-0 trace runs); the concave kinds need a scale.
    WeightSpec(WeightKind k, double lam, double gam = 0.0) : kind(k), lambda(lam), gamma(gam) {
        if (kind == WeightKind::Constant) {
            if (!(lambda >= 0.0)) throw InvalidInput("WeightSpec: lambda must be >= 0");
        } else if (!(lambda > 0.0)) {
            throw InvalidInput("WeightSpec: lambda must be > 0");
        }
        if (kind == WeightKind::Scad && !(gamma > 2.0))
            throw InvalidInput("WeightSpec: SCAD needs gamma > 2");
        if (kind == WeightKind::Mcp && !(gamma > 1.0))
            throw InvalidInput("WeightSpec: MCP needs gamma > 1");
    }
};

// Weight as a function of magnitude: both concave penalties only look at |t|,
// so strong negative entries are downweighted the same as positive ones.
inline double weight(const WeightSpec& spec, double t) {
    const double a = std::abs(t);
    switch (spec.kind) {
        case WeightKind::Scad: {
            const double gl = spec.gamma * spec.lambda;
            if (a <= spec.lambda) return 1.0;
            if (a < gl) return (gl - a) / ((spec.gamma - 1.0) * spec.lambda);
            return 0.0;
        }
        case WeightKind::Mcp:
            return std::max(0.0, 1.0 - a / (spec.gamma * spec.lambda));
        default:
            return 1.0;
    }
}

// Per-entry penalty levels; symmetric, nonnegative, zero diagonal.
class PenaltyMatrix {
  public:
    explicit PenaltyMatrix(const SymMatrix& entries) : m_(entries) {
        for (int i = 0; i < m_.dim(); ++i) {
            if (m_(i, i) != 0.0) throw InvalidInput("PenaltyMatrix: diagonal must be zero");
            for (int j = i + 1; j < m_.dim(); ++j)
                if (!(m_(i, j) >= 0.0)) throw InvalidInput("PenaltyMatrix: negative entry");
        }
    }

    static PenaltyMatrix uniform(int dim, double lambda) {
        if (!(lambda >= 0.0)) throw InvalidInput("PenaltyMatrix: negative lambda");
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) m.set(i, j, lambda);
        return PenaltyMatrix(m);
    }

    static PenaltyMatrix zero(int dim) { return uniform(dim, 0.0); }

    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const SymMatrix& entries() const { return m_; }

  private:
    SymMatrix m_;
};

// Lambda^(l) = lambda * w(|psi^(l-1)_ij|) off the diagonal, 0 on it.
inline PenaltyMatrix build_penalty_matrix(const WeightSpec& spec, const SymMatrix& prev) {
    SymMatrix m(prev.dim());
    for (int i = 0; i < prev.dim(); ++i)
        for (int j = i + 1; j < prev.dim(); ++j)
            m.set(i, j, spec.lambda * weight(spec, prev(i, j)));
    return PenaltyMatrix(m);
}

struct WeightClassReport {
    bool nonincreasing_ok = false;
    bool range_ok = false;
    bool one_at_nonpositive_ok = false;
    bool zero_reached = false;  // false for the constant weight (reported, not fatal)
    double alpha = std::numeric_limits<double>::infinity();  // smallest alpha with w(alpha*lambda)=0
};

// Grid audit of an arbitrary weight function against the admissible class:
// nonincreasing, range [0,1], w == 1 for t <= 0.  Throws ClassViolation with
// the offending grid point; whether w ever reaches 0 is only reported.
inline WeightClassReport check_weight_function(const std::function<double(double)>& w,
                                               double lambda, double half_range) {
    const int n = 1000;
    WeightClassReport rep;
    rep.nonincreasing_ok = rep.range_ok = rep.one_at_nonpositive_ok = true;

    double prev_val = std::numeric_limits<double>::infinity();
    double last_pos = 0.0;   // largest t seen with w(t) > 0
    double first_zero = -1;  // smallest t >= 0 with w(t) == 0
    for (int k = 0; k < n; ++k) {
        const double t = -half_range + (2.0 * half_range) * k / (n - 1);
        const double v = w(t);
        if (!(v >= 0.0 && v <= 1.0))
            throw ClassViolation("weight out of [0,1] at t = " + std::to_string(t));
        if (t <= 0.0 && v != 1.0)
            throw ClassViolation("weight != 1 at nonpositive t = " + std::to_string(t));
        if (t > 0.0) {
            if (v > prev_val + 1e-12)
                throw ClassViolation("weight increases at t = " + std::to_string(t));
            prev_val = v;
            if (v == 0.0 && first_zero < 0) first_zero = t;
            if (v > 0.0) last_pos = t;
        }
    }

    if (first_zero >= 0 && first_zero > last_pos) {
        // bisect the positive/zero boundary down to machine precision
        double lo = last_pos, hi = first_zero;
        for (int it = 0; it < 200 && lo < hi; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (w(mid) == 0.0)
                hi = mid;
            else
                lo = mid;
        }
        rep.zero_reached = true;
        rep.alpha = hi / lambda;
    }
    return rep;
}

inline WeightClassReport check_weight_class(const WeightSpec& spec) {
    if (!(spec.lambda > 0.0))
        throw InvalidInput("check_weight_class: needs lambda > 0 to set the grid scale");
    const double g = (spec.kind == WeightKind::Constant) ? 2.0 : spec.gamma;
    return check_weight_function([&spec](double t) { return t <= 0.0 ? 1.0 : weight(spec, t); },
                                 spec.lambda, 2.0 * g * spec.lambda);
}

}  // namespace seqglasso
