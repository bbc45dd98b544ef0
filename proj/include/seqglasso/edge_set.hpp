#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "seqglasso/errors.hpp"

namespace seqglasso {

// Undirected off-diagonal support: sorted unique (i, j) pairs with i < j.
class EdgeSet {
  public:
    using Edge = std::pair<int, int>;

    EdgeSet() = default;

    void add(int i, int j) {
        if (i == j) throw InvalidInput("EdgeSet: self loop");
        if (i < 0 || j < 0) throw InvalidInput("EdgeSet: negative index");
        if (i > j) std::swap(i, j);
        Edge e{i, j};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || *it != e) edges_.insert(it, e);
    }

    bool contains(int i, int j) const {
        if (i > j) std::swap(i, j);
        return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
    }

    size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    const std::vector<Edge>& pairs() const { return edges_; }

    auto begin() const { return edges_.begin(); }
    auto end() const { return edges_.end(); }

    bool operator==(const EdgeSet& other) const { return edges_ == other.edges_; }

    // |this \ other|
    size_t count_not_in(const EdgeSet& other) const {
        size_t n = 0;
        for (const auto& e : edges_)
            if (!other.contains(e.first, e.second)) ++n;
        return n;
    }

  private:
    std::vector<Edge> edges_;
};

// Off-diagonal support of a symmetric matrix at the given magnitude cutoff.
template <typename Sym>
inline EdgeSet support_of(const Sym& a, double tol) {
    EdgeSet s;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i + 1; j < a.dim(); ++j)
            if (std::abs(a(i, j)) > tol) s.add(i, j);
    return s;
}

}  // namespace seqglasso
