#include "vdec/generate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "vdec/errors.hpp"
#include "vdec/rng.hpp"

namespace vdec {

Graph gen_gnp(int n, double p, std::uint64_t seed) {
    if (n < 0) throw PreconditionError("gnp needs n >= 0");
    if (p < 0.0 || p > 1.0) throw PreconditionError("gnp needs p in [0, 1]");
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.chance(p)) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_cycle(int n) {
    if (n < 3) throw PreconditionError("cycle needs n >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    edges.emplace_back(0, n - 1);
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_path(int n) {
    if (n < 1) throw PreconditionError("path needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_star(int n) {
    if (n < 2) throw PreconditionError("star needs n >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_tree(int n, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("tree needs n >= 1");
    if (n <= 2) return gen_path(n);
    Rng rng(seed);
    std::vector<int> pruefer(static_cast<std::size_t>(n - 2));
    for (int& x : pruefer) x = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(n)));

    std::vector<int> deg(static_cast<std::size_t>(n), 1);
    for (int x : pruefer) ++deg[static_cast<std::size_t>(x)];

    std::vector<std::pair<int, int>> edges;
    // ptr scans for leaves in ascending order; `leaf` may move below ptr when
    // removing the current code symbol creates a smaller leaf.
    int ptr = 0;
    while (deg[static_cast<std::size_t>(ptr)] != 1) ++ptr;
    int leaf = ptr;
    for (int x : pruefer) {
        edges.emplace_back(std::min(leaf, x), std::max(leaf, x));
        if (--deg[static_cast<std::size_t>(x)] == 1 && x < ptr) {
            leaf = x;
        } else {
            ++ptr;
            while (deg[static_cast<std::size_t>(ptr)] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.emplace_back(std::min(leaf, n - 1), std::max(leaf, n - 1));
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_regular(int n, int d, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("regular needs n >= 1");
    if (d < 0 || d >= n) throw PreconditionError("regular needs 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw PreconditionError("regular needs n*d even, got n=" + std::to_string(n) +
                                " d=" + std::to_string(d));
    if (d == 0) return Graph::from_edges(n, {});

    // Pairing model: d points per vertex (point i belongs to vertex i / d).
    // After pairing, rejected pairs (loops or parallels) are re-paired among
    // their own points; a full restart only when that stops making progress.
    Rng rng(seed);
    const int np = n * d;
    std::vector<int> pts(static_cast<std::size_t>(np));
    const int restarts = 200;
    for (int attempt = 0; attempt < restarts; ++attempt) {
        std::iota(pts.begin(), pts.end(), 0);
        rng.shuffle(pts);
        for (int round = 0; round < 500; ++round) {
            std::map<std::pair<int, int>, int> mult;
            for (int t = 0; t + 1 < np; t += 2) {
                int u = pts[static_cast<std::size_t>(t)] / d;
                int v = pts[static_cast<std::size_t>(t + 1)] / d;
                if (u > v) std::swap(u, v);
                ++mult[{u, v}];
            }
            std::vector<int> pool;
            for (int t = 0; t + 1 < np; t += 2) {
                int u = pts[static_cast<std::size_t>(t)] / d;
                int v = pts[static_cast<std::size_t>(t + 1)] / d;
                if (u > v) std::swap(u, v);
                if (u == v || mult[{u, v}] > 1) {
                    pool.push_back(t);
                    pool.push_back(t + 1);
                }
            }
            if (pool.empty()) {
                std::vector<std::pair<int, int>> edges;
                for (const auto& kv : mult) edges.push_back(kv.first);
                return Graph::from_edges(n, std::move(edges));
            }
            // Also reshuffle one good pair so a pool confined to few vertices
            // (e.g. a double edge) cannot cycle among the same pairings.
            if (static_cast<int>(pool.size()) < np) {
                for (;;) {
                    int t = 2 * static_cast<int>(rng.uniform(static_cast<std::uint64_t>(np / 2)));
                    if (std::find(pool.begin(), pool.end(), t) == pool.end()) {
                        pool.push_back(t);
                        pool.push_back(t + 1);
                        break;
                    }
                }
            }
            std::vector<int> vals;
            vals.reserve(pool.size());
            for (int idx : pool) vals.push_back(pts[static_cast<std::size_t>(idx)]);
            rng.shuffle(vals);
            for (std::size_t i = 0; i < pool.size(); ++i)
                pts[static_cast<std::size_t>(pool[i])] = vals[i];
        }
    }
    throw StageError("pairing model failed to reach a simple graph for n=" +
                     std::to_string(n) + " d=" + std::to_string(d));
}

}  // namespace vdec
