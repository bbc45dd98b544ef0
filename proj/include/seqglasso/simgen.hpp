#pragma once

// Synthetic ground truth: the four graph families, the shift-and-standardize
// model recipe, and seeded Gaussian sampling.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqglasso/data_matrix.hpp"
#include "seqglasso/edge_set.hpp"
#include "seqglasso/errors.hpp"
#include "seqglasso/rng.hpp"
#include "seqglasso/spd.hpp"
#include "seqglasso/sym_matrix.hpp"

namespace seqglasso {

enum class GraphFamily { Random, Band, Chain, Star };

inline const char* family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::Random: return "random";
        case GraphFamily::Band: return "band";
        case GraphFamily::Chain: return "chain";
        default: return "star";
    }
}

inline GraphFamily family_from_name(const std::string& s) {
    if (s == "random") return GraphFamily::Random;
    if (s == "band") return GraphFamily::Band;
    if (s == "chain") return GraphFamily::Chain;
    if (s == "star") return GraphFamily::Star;
    throw InvalidInput("unknown graph family: " + s);
}

inline constexpr double kRandomEdgeProb = 0.025;

// 0/1 adjacency with zero diagonal.  `k` is the chain/star size parameter and
// is ignored for the random and band families.  The random family consumes
// the generator in fixed row-major upper-triangle order.
inline SymMatrix gen_adjacency(GraphFamily family, int d, int k, std::mt19937_64& rng) {
    if (d < 2) throw InvalidInput("gen_adjacency: d must be >= 2");
    SymMatrix a(d);
    switch (family) {
        case GraphFamily::Random:
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    if (uniform01(rng) < kRandomEdgeProb) a.set(i, j, 1.0);
            break;
        case GraphFamily::Band:
            for (int i = 0; i + 1 < d; ++i) a.set(i, i + 1, 1.0);
            break;
        case GraphFamily::Chain:
            if (k < 1 || k + 1 > d) throw InvalidInput("gen_adjacency: chain needs 1 <= k <= d-1");
            for (int i = 0; i < k; ++i) a.set(i, i + 1, 1.0);
            break;
        case GraphFamily::Star:
            if (k < 1 || k + 1 > d) throw InvalidInput("gen_adjacency: star needs 1 <= k <= d-1");
            for (int i = 1; i <= k; ++i) a.set(0, i, 1.0);
            break;
    }
    return a;
}

struct ModelSpec {
    SymMatrix theta_true;  // ground-truth precision
    SymMatrix sigma_true;  // its inverse
    EdgeSet edges;         // support of the constructed sparse matrix
    GraphFamily family = GraphFamily::Band;
    int k = 0;  // chain/star parameter, 0 otherwise
    std::uint64_t seed = 0;
};

// How to read the shifted-and-standardized sparse matrix: as the precision
// (default; edge recovery against the graph only makes sense this way) or
// literally as the covariance.
enum class ModelReading { Precision, LiteralCovariance };

inline ModelSpec build_model(const SymMatrix& adj, ModelReading reading = ModelReading::Precision) {
    const int d = adj.dim();
    for (int i = 0; i < d; ++i) {
        if (adj(i, i) != 0.0) throw InvalidInput("build_model: adjacency diagonal must be zero");
        for (int j = i + 1; j < d; ++j)
            if (adj(i, j) != 0.0 && adj(i, j) != 1.0)
                throw InvalidInput("build_model: adjacency entries must be 0/1");
    }

    SymMatrix e(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) e.set(i, j, 0.4 * adj(i, j));

    const double shift = 0.1 - min_eigenvalue(e);
    if (!(shift > 0.0)) throw DegenerateModel("build_model: nonpositive diagonal shift");

    // raw = E + shift*I has constant diagonal `shift`; dividing by it
    // standardizes to unit diagonal and preserves zeros exactly
    SymMatrix standardized(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) standardized.set(i, j, e(i, j) / shift);
        standardized.set(i, i, 1.0);
    }

    ModelSpec m;
    m.edges = support_of(adj, 0.5);
    if (reading == ModelReading::Precision) {
        m.theta_true = standardized;
        m.sigma_true = inverse_spd(standardized);
    } else {
        m.sigma_true = standardized;
        m.theta_true = inverse_spd(standardized);
    }
    return m;
}

// rows are L z with z iid standard normal, drawn row-major; bitwise
// reproducible given the generator state
inline DataMatrix sample_gaussian(const SymMatrix& sigma, int n, std::mt19937_64& rng) {
    if (n < 1) throw InvalidInput("sample_gaussian: n must be >= 1");
    const int d = sigma.dim();
    const CholeskyFactor L = cholesky(sigma);

    DataMatrix x(n, d);
    std::vector<double> z(static_cast<size_t>(d));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) z[static_cast<size_t>(j)] = standard_normal(rng);
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int t = 0; t <= j; ++t) s += L(j, t) * z[static_cast<size_t>(t)];
            x.at(i, j) = s;
        }
    }
    return x;
}

inline DataMatrix sample_gaussian(const SymMatrix& sigma, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_gaussian(sigma, n, rng);
}

inline nlohmann::json model_to_json(const ModelSpec& m) {
    nlohmann::json j;
    j["family"] = family_name(m.family);
    j["k"] = m.k;
    j["d"] = m.theta_true.dim();
    j["seed"] = m.seed;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : m.edges) edges.push_back({e.first, e.second});
    j["edges"] = edges;
    j["theta_true"] = m.theta_true.data();
    j["sigma_true"] = m.sigma_true.data();
    return j;
}

inline ModelSpec model_from_json(const nlohmann::json& j) {
    ModelSpec m;
    m.family = family_from_name(j.at("family").get<std::string>());
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const int d = j.at("d").get<int>();
    m.theta_true = SymMatrix(d, j.at("theta_true").get<std::vector<double>>());
    m.sigma_true = SymMatrix(d, j.at("sigma_true").get<std::vector<double>>());
    for (const auto& e : j.at("edges")) m.edges.add(e.at(0).get<int>(), e.at(1).get<int>());
    return m;
}

}  // namespace seqglasso
