#pragma once

#include <vector>

#include "vdec/graph.hpp"

namespace vdec {

struct Matching {
    std::vector<std::pair<int, int>> edges;  // (u, v) with u < v, sorted

    int size() const { return static_cast<int>(edges.size()); }
};

// Maximum matching in a general graph via blossom contraction. O(V^3),
// which is plenty at the scales the pipelines run at.
Matching max_matching(const Graph& g);

// True when g is connected, has odd order, and g - x has a perfect matching
// for every vertex x. K1 qualifies.
bool is_factor_critical(const Graph& g);

struct NoNearPerfectMatchingError : PreconditionError {
    explicit NoNearPerfectMatchingError(const std::string& what) : PreconditionError(what) {}
};

// Perfect matching of g - x; throws when none exists.
Matching near_perfect_matching(const Graph& g, int x);

}  // namespace vdec
