#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vdec/graph.hpp"

namespace vdec {

// Set of colors from a palette 1..K, stored as a width-K bitset (bit c-1
// for color c). Comparable and hashable so it can key a table.
struct ColorSet {
    std::vector<std::uint64_t> words;

    ColorSet() = default;
    explicit ColorSet(int palette) : words(static_cast<std::size_t>((palette + 63) / 64), 0) {}

    void insert(int c) {
        std::size_t w = static_cast<std::size_t>((c - 1) / 64);
        if (w >= words.size()) words.resize(w + 1, 0);
        words[w] |= std::uint64_t{1} << ((c - 1) % 64);
    }
    void erase(int c) {
        std::size_t w = static_cast<std::size_t>((c - 1) / 64);
        if (w < words.size()) words[w] &= ~(std::uint64_t{1} << ((c - 1) % 64));
    }
    bool contains(int c) const {
        std::size_t w = static_cast<std::size_t>((c - 1) / 64);
        return w < words.size() && (words[w] >> ((c - 1) % 64)) & 1;
    }
    int size() const;
    bool empty() const;
    std::vector<int> values() const;

    bool operator==(const ColorSet& o) const;
    bool operator!=(const ColorSet& o) const { return !(*this == o); }
};

struct ColorSetHash {
    std::size_t operator()(const ColorSet& s) const;
};

using ColorSetTable = std::unordered_map<ColorSet, int, ColorSetHash>;

// Edge coloring of a host graph. color[e] is in [1, palette]; 0 = unset.
struct EdgeColoring {
    Graph host;
    int palette = 0;
    std::vector<int> color;

    bool total() const;
    bool proper() const;
    int colors_used() const;
};

// Proper coloring with palette max_degree + 1 by fan rotations and
// two-color path inversions.
EdgeColoring vizing_color(const Graph& g);

// Set of colors on edges incident to v. Throws if any of them is unset.
ColorSet color_set(const EdgeColoring& c, int v);

// color set -> number of vertices carrying it (over all vertices; isolated
// vertices contribute the empty set).
ColorSetTable color_set_table(const EdgeColoring& c);

// Sum over distinct color sets of (vertex count)^2. Colorings in which
// every set appears at most twice minimize this at fixed palette feasibility.
long long potential(const EdgeColoring& c);

struct KempeChain {
    std::vector<int> edges;        // edge ids, in walk order
    bool cycle = false;
    std::array<int, 2> endpoints;  // path ends; meaningless for cycles
};

// Maximal components of the subgraph of edges colored a or b. Each is a
// path or an even cycle. Discovery order scans vertices by id.
std::vector<KempeChain> kempe_chains(const EdgeColoring& c, int a, int b);

// Exchange colors a and b on one chain. Properness is preserved, and only
// the path endpoints' color sets change.
void swap_chain(EdgeColoring& c, const KempeChain& chain, int a, int b);

// First-improvement local search over Kempe-chain swaps, minimizing the
// potential, with randomized perturbation restarts. Succeeds when every
// color set appears on at most two vertices; throws SemiVdFailedError when
// the restart budget runs out first.
EdgeColoring semi_vd_refine(const EdgeColoring& start, std::uint64_t seed, int restarts = 50);

}  // namespace vdec
