#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdec/edge_coloring.hpp"
#include "vdec/path_factor.hpp"

namespace vdec {

struct Violation {
    std::string check;
    std::vector<int> vertices;
    std::vector<int> edges;
};

struct VerificationReport {
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
};

// Every edge colored within [1, palette] and no two adjacent edges equal.
VerificationReport verify_proper(const Graph& g, const EdgeColoring& c);

// All vertex color-sets pairwise distinct (requires a total coloring).
VerificationReport verify_vd(const Graph& g, const EdgeColoring& c);

// No color-set occurs on three or more vertices.
VerificationReport verify_semi_vd(const Graph& g, const EdgeColoring& c);

// The three linear-forest properties: paths of 2..4 edges; the graph minus
// covered vertices has only isolated vertices/edges and every uncovered
// vertex has degree <= (max_degree+1)/2; covered neighbors of uncovered
// vertices have forest-degree 2.
VerificationReport verify_forest(const Graph& g, const LinearForest& f);

// Paths are vertex-disjoint, consecutive vertices adjacent, and every
// path's vertex count belongs to allowed_lengths.
VerificationReport verify_packing(const Graph& g, const PathPacking& p,
                                  const std::vector<int>& allowed_lengths);

// Exact minimum vertex-distinguishing palette within [k_lower_bound(g),
// k_max], by backtracking over edge colors in lexicographic edge order with
// canonical color introduction and duplicate-set pruning. nullopt when no
// k <= k_max admits one. k_max < 0 means k_lower_bound(g) + 3. A witness
// coloring is stored through out when given.
std::optional<int> exact_chi_vd(const Graph& g, int k_max = -1,
                                EdgeColoring* out = nullptr);

// Independently coded upper-bound search: seeded greedy proper colorings
// tested for distinctness, smallest successful palette in [k_lower_bound,
// k_max] returned. Never below the true optimum, so it cross-checks
// exact_chi_vd from above.
std::optional<int> randomized_vd_upper(const Graph& g, int k_max, std::uint64_t seed,
                                       int tries_per_k = 2000);

}  // namespace vdec
