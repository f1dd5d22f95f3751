#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vdec/edge_coloring.hpp"
#include "vdec/graph.hpp"
#include "vdec/path_factor.hpp"

namespace vdec {

// Disjoint unordered vertex pairs whose color-sets must end up distinct.
struct PairConstraints {
    std::vector<std::pair<int, int>> pairs;  // stored with first < second
};

// Per-vertex lists of vertices whose fresh forest color-sets must differ
// from the key vertex's. Every listed vertex shares the key's forest
// degree, and each list holds at most 2*C(k, d_F) - 1 entries.
struct ForbiddenSets {
    std::map<int, std::vector<int>> at;
};

// One pipeline stage: name, the color range it wrote (inclusive, 0/0 when
// it colors nothing), the scope it worked on, wall time, derived seeds.
struct PipelineStage {
    std::string name;
    int palette_lo = 0;
    int palette_hi = 0;
    long long vertices = 0;
    long long edges = 0;
    double elapsed_ms = 0.0;
    std::vector<std::uint64_t> seeds;
};

// Everything a pipeline run produced besides the final coloring, for
// reproducibility and inspection.
struct PipelineTrace {
    std::uint64_t master_seed = 0;
    LinearForest forest;
    EdgeColoring base;                     // semi-vd coloring before any shift
    std::optional<EdgeColoring> shifted;   // coloring after the conflict-edge shift
    EdgeColoring recolored;                // fresh coloring of the forest edges
    std::vector<PipelineStage> stages;
};

// Fresh-palette recoloring of all forest edges so that designated vertex
// pairs get distinct fresh color-sets. base fixes k (its palette); the
// fresh palette is exactly floor(3.5k) + 1 colors. Pairs with an endpoint
// outside the forest are ignored. Components are processed in increasing
// order of their smallest vertex; candidate color sets are built forward
// along each path and colors are picked backward, lowest first.
EdgeColoring path_recolor(const LinearForest& f, const EdgeColoring& base,
                          const ForbiddenSets& forb, const PairConstraints& pairs);

// Conflict-edge selection for the uncovered set X: pairs of X-vertices with
// equal color-sets, one chosen edge per pair (from u toward the forest,
// else from v, else u's unique edge), plus the swap that avoids the {1,1}
// degree pattern. H is the spanning subgraph on the chosen edges.
struct ConflictSelection {
    PairConstraints colliding_pairs;
    std::vector<int> chosen_edges;  // edge ids into the host graph, ascending
    Graph chosen_subgraph;
};
ConflictSelection select_conflict_edges(const Graph& g, const LinearForest& forest,
                                        const EdgeColoring& base);

// Proper 3-coloring of a system of disjoint paths, each with at least two
// edges, such that designated vertex pairs get distinct color-sets. The
// host is the union of the paths; returned coloring's host graph is that
// union with the original vertex ids.
EdgeColoring long_path_3color(const PathPacking& paths, const PairConstraints& pairs);

// Vertex-distinguishing proper coloring with at most floor(5.5*K + 6.5)
// colors for K = k_lower_bound(g), built as: linear forest, Vizing plus
// semi-vd refinement at k = K+1 colors, conflict-edge shift into (k, 2k],
// forest recoloring into fresh colors above 2k.
EdgeColoring general_vdec(const Graph& g, std::uint64_t seed,
                          PipelineTrace* trace = nullptr,
                          int exact_limit = 20, int restarts = 200);

// Vertex-distinguishing proper coloring with at most k_lower_bound(g) + 3
// colors for d-regular graphs with d >= log2 n, log2 n >= 8, g not
// complete: spanning forest, semi-vd refinement of g minus the forest at
// k_lower_bound(g) colors, then a 3-coloring of the forest with fresh
// colors that separates the residual collisions.
EdgeColoring regular_vdec(const Graph& g, std::uint64_t seed,
                          PipelineTrace* trace = nullptr,
                          int exact_limit = 20, int restarts = 200);

}  // namespace vdec
