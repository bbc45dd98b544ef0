#pragma once

#include <stdexcept>
#include <string>

namespace seqglasso {

// Thrown when a Cholesky pivot falls below the relative floor; `index` is the
// first offending pivot position.
struct NotPositiveDefinite : std::runtime_error {
    int index;
    explicit NotPositiveDefinite(int idx, const std::string& what_arg)
        : std::runtime_error(what_arg), index(idx) {}
};

// Solver gave up: either the sweep budget ran out or the objective stalled
// while the KKT residual was still above tolerance.
struct NotConverged : std::runtime_error {
    int sweeps;
    double kkt_residual;
    bool stalled;
    NotConverged(int sw, double res, bool st, const std::string& what_arg)
        : std::runtime_error(what_arg), sweeps(sw), kkt_residual(res), stalled(st) {}
};

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

struct DimMismatch : std::runtime_error {
    explicit DimMismatch(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// A user-supplied weight function failed the decreasing-in-|t| / range audit.
struct ClassViolation : std::runtime_error {
    explicit ClassViolation(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Synthetic model construction produced something unusable (non-PD after the
// diagonal shift, degenerate scaling, ...).
struct DegenerateModel : std::runtime_error {
    explicit DegenerateModel(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Wraps a solver failure inside the reweighting loop so the caller can tell
// which stage died.
struct StageFailure : std::runtime_error {
    int stage;  // 1-based
    StageFailure(int st, const std::string& what_arg)
        : std::runtime_error(what_arg), stage(st) {}
};

}  // namespace seqglasso
