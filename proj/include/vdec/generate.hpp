#pragma once

#include <cstdint>

#include "vdec/graph.hpp"

namespace vdec {

// Deterministic graph generators: the same (parameters, seed) always yields
// the same graph, with canonical labels "0".."n-1".

// Erdos-Renyi G(n, p): every unordered pair is an edge with probability p.
Graph gen_gnp(int n, double p, std::uint64_t seed);

// Cycle 0-1-...-(n-1)-0; requires n >= 3.
Graph gen_cycle(int n);

// Path 0-1-...-(n-1); requires n >= 1.
Graph gen_path(int n);

// Star with center 0 and n-1 leaves; requires n >= 2.
Graph gen_star(int n);

// Uniformly random labeled tree (Pruefer decode); requires n >= 1.
Graph gen_tree(int n, std::uint64_t seed);

// Random d-regular simple graph via the pairing model: d points per vertex,
// a random perfect pairing of the points, loops and parallel pairs rejected
// and re-paired among themselves until the collapsed graph is simple.
// Requires 0 <= d < n and n*d even.
Graph gen_regular(int n, int d, std::uint64_t seed);

}  // namespace vdec
