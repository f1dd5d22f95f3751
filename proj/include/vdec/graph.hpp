#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vdec/errors.hpp"

namespace vdec {

// Simple undirected graph with dense 0-based vertex ids. Edges are stored
// as (u, v) with u < v, sorted lexicographically; edge ids are positions in
// that list. Adjacency lists are sorted by neighbor id.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
    std::vector<std::string> labels;                    // id -> external label

    static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[static_cast<std::size_t>(v)].size()); }
    int max_degree() const;
    int min_degree() const;
    bool has_edge(int u, int v) const { return edge_id(u, v) >= 0; }
    int edge_id(int u, int v) const;  // -1 when absent
    const std::string& label(int v) const { return labels[static_cast<std::size_t>(v)]; }
};

// Undirected multigraph; parallel edges carry a multiplicity.
struct Multigraph {
    int n = 0;
    std::vector<std::tuple<int, int, int>> edges;       // (u, v, multiplicity), u < v
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, multiplicity)

    static Multigraph from_edges(int n, std::vector<std::tuple<int, int, int>> edge_list);

    // Degree counting multiplicities.
    int mult_degree(int v) const;
};

// counts[d] = number of vertices of degree d, for d in [0, max_deg].
struct DegreeProfile {
    int min_deg = 0;
    int max_deg = 0;
    std::vector<long long> counts;
};

DegreeProfile degree_profile(const Graph& g);

// Edge-list text format: one "u v" per line, '#' starts a comment, blank
// lines are skipped, labels are arbitrary whitespace-free tokens. A header
// "vertices: N" pre-registers canonical labels "0".."N-1"; a single-token
// line declares that label as a vertex (isolated unless edges mention it).
Graph load_graph(const std::string& text);
Graph load_graph_file(const std::string& path);
std::string save_graph(const Graph& g);

// Feasibility for vertex-distinguishing colorings: at most one isolated
// vertex and no component that is a single edge.
bool is_vdec(const Graph& g);

// Exact test C(k, d) >= need, in unbounded integers. C(k, d) = 0 for d > k
// or d < 0, and C(k, 0) = 1.
bool binomial_at_least(int k, int d, long long need);

// Least k such that C(k, d) >= n_d for every degree class d >= 1 present in
// g (and n_0 <= 1 for the isolated class). Binomials are exact big integers.
int k_lower_bound(const Graph& g);

// Vertex sets of connected components, each sorted, ordered by smallest id.
std::vector<std::vector<int>> components(const Graph& g);

// Result of contracting the listed components of g - s into single vertices
// and keeping only the s-to-component edges, as a bipartite multigraph.
// comps must be whole components of g - s but need not list all of them;
// edges to unlisted components are dropped. B ids 0..|s|-1 are the
// s-vertices in ascending id order; id |s|+i is comps[i].
struct Contraction {
    Multigraph b;
    std::vector<int> s_vertices;  // B id -> host id for the s side
    std::vector<int> comp_vertex; // component index -> B id
};

Contraction contract_components(const Graph& g, const std::vector<int>& s,
                                const std::vector<std::vector<int>>& comps);

// Induced subgraph on verts (sorted ascending internally); local id i maps
// to host id (*to_host)[i]. Labels are inherited.
Graph induced_subgraph(const Graph& g, const std::vector<int>& verts,
                       std::vector<int>* to_host = nullptr);

// Copy of g without the given edge ids; vertex ids are preserved.
Graph remove_edges(const Graph& g, const std::vector<int>& edge_ids);

}  // namespace vdec
