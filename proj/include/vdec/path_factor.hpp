#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vdec/graph.hpp"

namespace vdec {

// Vertex-disjoint paths in a host graph, each stored as a vertex sequence
// whose consecutive entries must be adjacent in the host.
struct PathPacking {
    std::vector<std::vector<int>> paths;
};

enum class SunKind { k1, k2, big };

// A sun component: K1, K2, or a factor-critical core with exactly one
// degree-1 pendant hanging off every core vertex.
struct SunDecomposition {
    SunKind kind = SunKind::k1;
    Graph host;               // the component itself
    std::vector<int> core;    // ascending; empty unless kind == big
    std::vector<int> pendant; // pendant[i] belongs to core[i]

    int pendant_of(int core_vertex) const;
};

// Recognizes suns. component must be connected.
std::optional<SunDecomposition> is_sun(const Graph& component);

// Number of components of g that are suns.
int sun_count(const Graph& g);

// A set s witnessing the deficiency value sun(g - s) - 2|s|.
struct DeficiencyCertificate {
    std::vector<int> s;  // ascending
    long long value = 0;
};

// Exact deficiency by subset enumeration, smallest then lexicographically
// least maximizer kept. Sizes s with n - 3s <= best so far are pruned (every
// sun takes at least one vertex). Throws SizeExceededError above exact_limit.
DeficiencyCertificate deficiency(const Graph& g, int exact_limit = 20);

// True iff deficiency(g) <= 0, which is equivalent to g having a spanning
// partition into paths of 3..5 vertices (Kaneko's condition).
bool kaneko_condition(const Graph& g, int exact_limit = 20);

enum class SunPackMode { uncover_leaf, uncover_core_vertex };

// Packs a big sun with paths of 4..5 vertices built from a near-perfect
// matching of the core, leaving uncovered either one pendant whose neighbor
// gets path-degree 2 (uncover_leaf) or the pair {w, pendant(w)}
// (uncover_core_vertex). w defaults to the lowest-id core vertex. Paths are
// in the component's own vertex ids.
PathPacking sun_packing(const SunDecomposition& d, SunPackMode mode,
                        std::optional<int> w = std::nullopt);

// Vertex-disjoint P3s in a bipartite multigraph, one centered at every
// s-side vertex (degree exactly 2, distinct leaves), additionally covering
// every vertex of u. Parallel edges count for degrees but a P3 uses two
// distinct leaves. Built by augmenting paths for the degree-2 subgraph, then
// alternating exchanges that free non-u leaves in favor of uncovered u ones.
// Throws HallViolatedError when no such subgraph exists.
PathPacking p3_packing_covering(const Multigraph& b, const std::vector<int>& s_side,
                                const std::vector<int>& u);

// Disjoint paths of 3..5 vertices in a host graph plus the vertices they
// miss. Downstream stages rely on the three structural properties checked
// by verify_forest.
struct LinearForest {
    int n = 0;
    std::vector<std::vector<int>> paths;
    std::vector<int> uncovered;  // ascending

    // Validates sizes, adjacency, and disjointness; fills uncovered.
    static LinearForest from_paths(const Graph& g, std::vector<std::vector<int>> paths);

    bool covers(int v) const;
};

// degree[v] = number of forest edges at v (0, 1 or 2).
std::vector<int> forest_degree(const LinearForest& f);

// Host edge ids used by the forest, ascending.
std::vector<int> forest_edge_ids(const Graph& g, const LinearForest& f);

// Exact backtracking search for a spanning partition of g into paths of
// 3..5 vertices. complete says whether a miss is a proof of nonexistence
// (false once the node budget ran out; budget < 0 means unbounded).
struct FactorSearchResult {
    bool complete = true;
    std::optional<std::vector<std::vector<int>>> factor;
};

FactorSearchResult find_path_factor(const Graph& g, long long node_budget = -1);

// Linear forest with the three properties: (1) paths of 2..4 edges;
// (2) the graph minus covered vertices has only isolated vertices and
// isolated edges, and every uncovered vertex has degree <= (max_degree+1)/2;
// (3) every covered neighbor of an uncovered vertex has forest-degree 2.
// Per component: an exact factor search, then (within exact_limit) the
// deficiency-set construction, else a seeded chop-and-repair heuristic with
// restarts. Throws ForestFailedError when every strategy is exhausted.
LinearForest find_linear_forest(const Graph& g, std::uint64_t seed = 0,
                                int exact_limit = 20, int restarts = 200);

}  // namespace vdec
