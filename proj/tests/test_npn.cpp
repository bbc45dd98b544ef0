#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "seqglasso/glasso.hpp"
#include "seqglasso/npn.hpp"
#include "seqglasso/simgen.hpp"
#include "test_helpers.hpp"

using namespace seqglasso;
using testutil::unit_interval;
using Catch::Matchers::WithinAbs;

namespace {

DataMatrix two_columns(const std::vector<double>& a, const std::vector<double>& b) {
    DataMatrix x(static_cast<int>(a.size()), 2);
    for (size_t i = 0; i < a.size(); ++i) {
        x.at(static_cast<int>(i), 0) = a[i];
        x.at(static_cast<int>(i), 1) = b[i];
    }
    return x;
}

}  // namespace

TEST_CASE("kendall tau on three hand pairs") {
    CHECK(kendall_tau_matrix(two_columns({1, 2, 3}, {1, 2, 3}))(0, 1) == 1.0);
    CHECK(kendall_tau_matrix(two_columns({1, 2, 3}, {3, 2, 1}))(0, 1) == -1.0);
    // pair signs are (-1, +1, +1), so tau = 1/3
    SymMatrix t = kendall_tau_matrix(two_columns({1, 2, 3}, {2, 1, 3}));
    CHECK(t(0, 1) == 1.0 / 3.0);
    CHECK(t(0, 0) == 1.0);
    CHECK(t(1, 1) == 1.0);
}

TEST_CASE("kendall tau treats ties as zero contributions") {
    // pairs: (1,1) tied in col 0; the other two are concordant -> 2/3
    CHECK(kendall_tau_matrix(two_columns({1, 1, 2}, {1, 2, 3}))(0, 1) == 2.0 / 3.0);
    // constant column: every pair ties -> 0
    CHECK(kendall_tau_matrix(two_columns({5, 5, 5}, {1, 2, 3}))(0, 1) == 0.0);
    DataMatrix bad = two_columns({1, 2}, {3, 4});
    bad.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(kendall_tau_matrix(bad), InvalidInput);
}

TEST_CASE("fast kendall agrees with the reference exactly") {
    std::mt19937_64 g(314);
    // continuous draws plus integer-valued (tie-heavy) draws
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 30 + rep * 37;
        const int d = 4;
        DataMatrix x(n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j)
                x.at(i, j) = (rep % 2 == 0) ? standard_normal(g)
                                            : std::floor(6.0 * unit_interval(g));
        CHECK(kendall_tau_matrix_fast(x).same_bits(kendall_tau_matrix(x)));
    }
}

TEST_CASE("kendall tau is invariant to row permutation") {
    std::mt19937_64 g(99);
    DataMatrix x(25, 3);
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 3; ++j) x.at(i, j) = standard_normal(g);
    SymMatrix base = kendall_tau_matrix(x);

    std::vector<int> perm(25);
    for (int i = 0; i < 25; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), g);
    DataMatrix y(25, 3);
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 3; ++j) y.at(i, j) = x(perm[static_cast<size_t>(i)], j);
    CHECK(kendall_tau_matrix(y).same_bits(base));
}

TEST_CASE("kendall tau is invariant to strictly increasing transforms") {
    std::mt19937_64 g(2024);
    DataMatrix x(40, 4);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 4; ++j) x.at(i, j) = standard_normal(g);
    DataMatrix y(40, 4);
    for (int i = 0; i < 40; ++i) {
        y.at(i, 0) = std::exp(x(i, 0));
        y.at(i, 1) = x(i, 1) * x(i, 1) * x(i, 1);
        y.at(i, 2) = 2.0 * x(i, 2) + 1.0;
        y.at(i, 3) = std::atan(x(i, 3));
    }
    CHECK(kendall_tau_matrix(y).same_bits(kendall_tau_matrix(x)));
}

TEST_CASE("sine transform hand values") {
    SymMatrix tau(3);
    for (int i = 0; i < 3; ++i) tau.set(i, i, 1.0);
    tau.set(0, 1, 0.0);
    tau.set(0, 2, 1.0);
    tau.set(1, 2, 1.0 / 3.0);
    SymMatrix s = sine_transform(tau);
    CHECK(s(0, 1) == 0.0);
    CHECK(s(0, 2) == 1.0);
    CHECK_THAT(s(1, 2), WithinAbs(0.5, 1e-15));  // sin(pi/6)
    for (int i = 0; i < 3; ++i) CHECK(s(i, i) == 1.0);

    SymMatrix neg(2);
    neg.set(0, 0, 1.0);
    neg.set(1, 1, 1.0);
    neg.set(0, 1, -1.0);
    CHECK(sine_transform(neg)(0, 1) == -1.0);

    SymMatrix out_of_range(2);
    out_of_range.set(0, 1, 1.001);
    CHECK_THROWS_AS(sine_transform(out_of_range), InvalidInput);
}

TEST_CASE("sine transform maps [-1,1] into [-1,1]") {
    SymMatrix tau(2);
    tau.set(0, 0, 1.0);
    tau.set(1, 1, 1.0);
    for (int i = 0; i <= 200; ++i) {
        tau.set(0, 1, -1.0 + i / 100.0);
        const double v = sine_transform(tau)(0, 1);
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("psd repair is a bitwise no-op on well-conditioned input") {
    CHECK(psd_repair(SymMatrix::identity(3)).same_bits(SymMatrix::identity(3)));
    SymMatrix c(2, {1, 0.5, 0.5, 1});  // min eigenvalue 0.5
    CHECK(psd_repair(c).same_bits(c));
    CHECK_THROWS_AS(psd_repair(c, -1.0), InvalidInput);
}

TEST_CASE("psd repair fixes the rank-one corner case") {
    SymMatrix s(2, {1, 1, 1, 1});
    const double f = 1e-3;
    SymMatrix r = psd_repair(s, f);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 1) == 1.0);
    // clipping {0,2} to {f,2} and renormalizing gives off = (1-f/2)/(1+f/2)
    CHECK_THAT(r(0, 1), WithinAbs((1 - f / 2) / (1 + f / 2), 1e-12));
    CHECK_THAT(min_eigenvalue(r), WithinAbs(f / (1 + f / 2), 1e-12));

    Eigen::Matrix2d m;
    m << r(0, 0), r(0, 1), r(1, 0), r(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("npn estimate is bitwise invariant under monotone transforms") {
    std::mt19937_64 rng(7);
    ModelSpec m = build_model(gen_adjacency(GraphFamily::Band, 4, 0, rng));
    DataMatrix x = sample_gaussian(m.sigma_true, 120, 11ULL);
    DataMatrix y(x.n, x.d);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.d; ++j) y.at(i, j) = x(i, j) * x(i, j) * x(i, j);

    SequenceConfig cfg(WeightSpec{WeightKind::Scad, 0.3, 2.1}, 3);
    SequenceResult a = estimate_npn(x, cfg);
    SequenceResult b = estimate_npn(y, cfg);
    REQUIRE(a.psi_stages.size() == b.psi_stages.size());
    for (size_t s = 0; s < a.psi_stages.size(); ++s)
        CHECK(a.psi_stages[s].same_bits(b.psi_stages[s]));
    CHECK(a.theta_final.same_bits(b.theta_final));
}

TEST_CASE("npn estimate on d=2 matches the closed form") {
    std::mt19937_64 g(55);
    DataMatrix x(60, 2);
    for (int i = 0; i < 60; ++i) {
        const double u = standard_normal(g);
        x.at(i, 0) = u;
        x.at(i, 1) = 0.8 * u + 0.6 * standard_normal(g);
    }
    const double tau = kendall_tau_matrix(x)(0, 1);
    const double c12 = std::sin(tau * 1.5707963267948966);
    const double lam = 0.1;
    REQUIRE(std::abs(c12) > lam);  // strongly dependent draw

    SequenceConfig cfg(WeightSpec{WeightKind::Constant, lam, 2.0}, 1);
    cfg.solver.kkt_tol = 1e-10;
    SequenceResult r = estimate_npn(x, cfg);

    // soft-thresholded covariance off-diagonal, then a 2x2 inverse
    const double w = c12 - std::copysign(lam, c12);
    const double det = 1.0 - w * w;
    CHECK_THAT(r.psi_stages.back()(0, 1), WithinAbs(-w / det, 1e-8));
    CHECK_THAT(r.psi_stages.back()(0, 0), WithinAbs(1.0 / det, 1e-8));
    CHECK(r.theta_final.same_bits(r.psi_stages.back()));  // unit scales
}

TEST_CASE("npn estimate survives perfectly concordant columns") {
    DataMatrix x = two_columns({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10});
    SequenceConfig cfg(WeightSpec{WeightKind::Constant, 0.2, 2.0}, 1);
    SequenceResult r = estimate_npn(x, cfg);  // tau = 1 needs the repair
    CHECK(min_eigenvalue(r.psi_stages.back()) > 0.0);
    CHECK(r.psi_stages.back()(0, 1) < 0.0);  // strong positive dependence
}

TEST_CASE("npn estimate approaches the pearson path on gaussian data") {
    std::mt19937_64 rng(21);
    ModelSpec m = build_model(gen_adjacency(GraphFamily::Band, 3, 0, rng));
    SequenceConfig cfg(WeightSpec{WeightKind::Scad, 0.15, 2.1}, 2);

    auto gap = [&](int n) {
        DataMatrix x = sample_gaussian(m.sigma_true, n, 500ULL);
        SequenceResult npn = estimate_npn(x, cfg);
        SequenceResult pearson = run_sequence(sample_covariance(x), cfg);
        return frobenius_norm(subtract(npn.psi_stages.back(), pearson.psi_stages.back()));
    };
    const double g_small = gap(300);
    const double g_big = gap(6000);
    CHECK(g_big < g_small);
    // adaptive weights can flip near-threshold edges between the two paths,
    // so the asymptotic gap is small but not sampling-noise small
    CHECK(g_big < 0.15);
}
