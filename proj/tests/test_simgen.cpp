#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "seqglasso/simgen.hpp"
#include "seqglasso/spd.hpp"

using namespace seqglasso;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
    Eigen::MatrixXd m(a.dim(), a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
    return m;
}

}  // namespace

TEST_CASE("band adjacency is the first off-diagonal") {
    std::mt19937_64 rng(1);
    SymMatrix a = gen_adjacency(GraphFamily::Band, 4, 0, rng);
    EdgeSet want;
    want.add(0, 1);
    want.add(1, 2);
    want.add(2, 3);
    CHECK(support_of(a, 0.5) == want);
    for (int i = 0; i < 4; ++i) CHECK(a(i, i) == 0.0);
    CHECK(a(0, 2) == 0.0);
    CHECK(a(0, 3) == 0.0);
    CHECK(a(1, 3) == 0.0);
}

TEST_CASE("star adjacency links the hub only") {
    std::mt19937_64 rng(1);
    SymMatrix a = gen_adjacency(GraphFamily::Star, 5, 3, rng);
    EdgeSet want;
    want.add(0, 1);
    want.add(0, 2);
    want.add(0, 3);
    CHECK(support_of(a, 0.5) == want);
    // vertex 4 is isolated
    for (int i = 0; i < 4; ++i) CHECK(a(i, 4) == 0.0);
}

TEST_CASE("chain adjacency uses only the first k+1 vertices") {
    std::mt19937_64 rng(1);
    SymMatrix a = gen_adjacency(GraphFamily::Chain, 6, 2, rng);
    EdgeSet want;
    want.add(0, 1);
    want.add(1, 2);
    CHECK(support_of(a, 0.5) == want);
    CHECK_THROWS_AS(gen_adjacency(GraphFamily::Chain, 4, 4, rng), InvalidInput);
    CHECK_THROWS_AS(gen_adjacency(GraphFamily::Star, 4, 0, rng), InvalidInput);
    CHECK_THROWS_AS(gen_adjacency(GraphFamily::Band, 1, 0, rng), InvalidInput);
}

TEST_CASE("random adjacency edge count is near the binomial mean") {
    std::mt19937_64 rng(20240915ULL);
    const int d = 150;
    SymMatrix a = gen_adjacency(GraphFamily::Random, d, 0, rng);
    const double pairs = d * (d - 1) / 2.0;  // 11175
    const double mean = pairs * kRandomEdgeProb;
    const double sd = std::sqrt(pairs * kRandomEdgeProb * (1.0 - kRandomEdgeProb));
    const double count = static_cast<double>(support_of(a, 0.5).size());
    CHECK(std::abs(count - mean) <= 3.0 * sd);
    // symmetric 0/1 with zero diagonal
    for (int i = 0; i < d; ++i) {
        CHECK(a(i, i) == 0.0);
        for (int j = i + 1; j < d; ++j) {
            CHECK((a(i, j) == 0.0 || a(i, j) == 1.0));
            CHECK(a(i, j) == a(j, i));
        }
    }
}

TEST_CASE("empty graph builds the identity model") {
    ModelSpec m = build_model(SymMatrix(3));
    CHECK(m.theta_true.same_bits(SymMatrix::identity(3)));
    CHECK(m.sigma_true.same_bits(SymMatrix::identity(3)));
    CHECK(m.edges.size() == 0);
}

TEST_CASE("band d=3 model matches the closed-form shift") {
    std::mt19937_64 rng(1);
    SymMatrix adj = gen_adjacency(GraphFamily::Band, 3, 0, rng);
    ModelSpec m = build_model(adj);

    // E = 0.4*adj has eigenvalues {-0.4*sqrt(2), 0, 0.4*sqrt(2)}
    const double shift = 0.1 + 0.4 * std::sqrt(2.0);
    CHECK_THAT(shift, WithinAbs(0.665685, 1e-6));
    const double off = 0.4 / shift;
    CHECK_THAT(m.theta_true(0, 1), WithinAbs(off, 1e-12));
    CHECK_THAT(m.theta_true(1, 2), WithinAbs(off, 1e-12));
    CHECK(m.theta_true(0, 2) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(m.theta_true(i, i) == 1.0);
    CHECK_THAT(off, WithinAbs(0.600885, 1e-6));

    // smallest precision eigenvalue is 0.1/shift; cross-check with Eigen
    CHECK_THAT(min_eigenvalue(m.theta_true), WithinAbs(0.1 / shift, 1e-12));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m.theta_true));
    CHECK_THAT(es.eigenvalues().minCoeff(), WithinAbs(0.150221, 1e-6));

    // sigma really is the inverse
    Eigen::MatrixXd prod = to_eigen(m.theta_true) * to_eigen(m.sigma_true);
    CHECK((prod - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("model support equals the adjacency support") {
    std::mt19937_64 rng(77);
    SymMatrix adj = gen_adjacency(GraphFamily::Random, 40, 0, rng);
    ModelSpec m = build_model(adj);
    CHECK(m.edges == support_of(adj, 0.5));
    CHECK(support_of(m.theta_true, 1e-12) == m.edges);
    // precision stays well-conditioned by construction: min eig > 0
    CHECK(min_eigenvalue(m.theta_true) > 0.0);
}

TEST_CASE("literal covariance reading swaps the roles") {
    std::mt19937_64 rng(5);
    SymMatrix adj = gen_adjacency(GraphFamily::Band, 6, 0, rng);
    ModelSpec prec = build_model(adj, ModelReading::Precision);
    ModelSpec cov = build_model(adj, ModelReading::LiteralCovariance);
    CHECK(cov.sigma_true.same_bits(prec.theta_true));
    CHECK(cov.edges == prec.edges);
    Eigen::MatrixXd prod = to_eigen(cov.theta_true) * to_eigen(cov.sigma_true);
    CHECK((prod - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("build_model rejects bad adjacency") {
    SymMatrix a(3);
    a.set(0, 0, 1.0);
    CHECK_THROWS_AS(build_model(a), InvalidInput);
    SymMatrix b(3);
    b.set(0, 1, 0.5);
    CHECK_THROWS_AS(build_model(b), InvalidInput);
}

TEST_CASE("identity sampling concentrates on the identity") {
    const int n = 50000;
    DataMatrix x = sample_gaussian(SymMatrix::identity(2), n, 123ULL);
    REQUIRE(x.n == n);
    REQUIRE(x.d == 2);
    SymMatrix s = sample_covariance(x);
    CHECK_THAT(s(0, 0), WithinAbs(1.0, 0.03));
    CHECK_THAT(s(1, 1), WithinAbs(1.0, 0.03));
    CHECK_THAT(s(0, 1), WithinAbs(0.0, 0.03));
}

TEST_CASE("single draw has one row") {
    DataMatrix x = sample_gaussian(SymMatrix::identity(3), 1, 9ULL);
    CHECK(x.n == 1);
    CHECK(x.d == 3);
    CHECK(std::isfinite(x(0, 0)));
    CHECK_THROWS_AS(sample_gaussian(SymMatrix::identity(3), 0, 9ULL), InvalidInput);
}

TEST_CASE("same seed reproduces samples bit for bit") {
    std::mt19937_64 rng(3);
    SymMatrix adj = gen_adjacency(GraphFamily::Band, 5, 0, rng);
    ModelSpec m = build_model(adj);
    DataMatrix a = sample_gaussian(m.sigma_true, 40, 2718ULL);
    DataMatrix b = sample_gaussian(m.sigma_true, 40, 2718ULL);
    REQUIRE(a.values.size() == b.values.size());
    for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    DataMatrix c = sample_gaussian(m.sigma_true, 40, 2719ULL);
    bool any_diff = false;
    for (size_t i = 0; i < a.values.size(); ++i) any_diff = any_diff || a.values[i] != c.values[i];
    CHECK(any_diff);
}

TEST_CASE("sample covariance converges to the model covariance") {
    // identity target: expected Frobenius error is sqrt(12/n) ~ 0.016,
    // so 0.05 holds with wide margin across consecutive seeds
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        DataMatrix x = sample_gaussian(SymMatrix::identity(3), 50000, seed);
        SymMatrix s = sample_covariance(x);
        CHECK(frobenius_norm(subtract(s, SymMatrix::identity(3))) < 0.05);
    }
    // correlated target: entries of sigma are ~2.3, so the per-entry CLT
    // noise is ~0.014 and the Frobenius error lands near 0.045
    std::mt19937_64 rng(11);
    ModelSpec m = build_model(gen_adjacency(GraphFamily::Band, 3, 0, rng));
    DataMatrix x = sample_gaussian(m.sigma_true, 50000, 4242ULL);
    CHECK(frobenius_norm(subtract(sample_covariance(x), m.sigma_true)) < 0.12);
}

TEST_CASE("model json round trip is exact") {
    std::mt19937_64 rng(42);
    SymMatrix adj = gen_adjacency(GraphFamily::Star, 7, 4, rng);
    ModelSpec m = build_model(adj);
    m.family = GraphFamily::Star;
    m.k = 4;
    m.seed = 42;
    nlohmann::json j = model_to_json(m);
    ModelSpec back = model_from_json(j);
    CHECK(back.theta_true.same_bits(m.theta_true));
    CHECK(back.sigma_true.same_bits(m.sigma_true));
    CHECK(back.edges == m.edges);
    CHECK(back.family == GraphFamily::Star);
    CHECK(back.k == 4);
    CHECK(back.seed == 42);
    CHECK(family_from_name(family_name(GraphFamily::Chain)) == GraphFamily::Chain);
    CHECK_THROWS_AS(family_from_name("triangle"), InvalidInput);
}
