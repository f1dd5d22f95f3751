#include "vdec/matching.hpp"

#include <algorithm>
#include <queue>

namespace vdec {

namespace {

// Classic O(V^3) blossom algorithm. base[v] tracks the contracted blossom a
// vertex currently belongs to; parent[] stores the alternating search tree.
class Blossom {
public:
    explicit Blossom(const Graph& g)
        : g_(g),
          match_(static_cast<std::size_t>(g.n), -1),
          parent_(static_cast<std::size_t>(g.n), -1),
          base_(static_cast<std::size_t>(g.n), 0),
          used_(static_cast<std::size_t>(g.n), false),
          blossom_(static_cast<std::size_t>(g.n), false) {}

    std::vector<int> run() {
        for (int v = 0; v < g_.n; ++v)
            if (match_[static_cast<std::size_t>(v)] == -1) augment_from(v);
        return match_;
    }

private:
    const Graph& g_;
    std::vector<int> match_, parent_, base_;
    std::vector<bool> used_, blossom_;

    int lca(int a, int b) {
        std::vector<bool> seen(static_cast<std::size_t>(g_.n), false);
        for (;;) {
            a = base_[static_cast<std::size_t>(a)];
            seen[static_cast<std::size_t>(a)] = true;
            if (match_[static_cast<std::size_t>(a)] == -1) break;
            a = parent_[static_cast<std::size_t>(match_[static_cast<std::size_t>(a)])];
        }
        for (;;) {
            b = base_[static_cast<std::size_t>(b)];
            if (seen[static_cast<std::size_t>(b)]) return b;
            b = parent_[static_cast<std::size_t>(match_[static_cast<std::size_t>(b)])];
        }
    }

    void mark_path(int v, int b, int child, std::queue<int>& q) {
        while (base_[static_cast<std::size_t>(v)] != b) {
            int mv = match_[static_cast<std::size_t>(v)];
            blossom_[static_cast<std::size_t>(base_[static_cast<std::size_t>(v)])] = true;
            blossom_[static_cast<std::size_t>(base_[static_cast<std::size_t>(mv)])] = true;
            parent_[static_cast<std::size_t>(v)] = child;
            child = mv;
            v = parent_[static_cast<std::size_t>(mv)];
        }
        (void)q;
    }

    int find_augmenting(int root) {
        std::fill(used_.begin(), used_.end(), false);
        std::fill(parent_.begin(), parent_.end(), -1);
        for (int i = 0; i < g_.n; ++i) base_[static_cast<std::size_t>(i)] = i;
        used_[static_cast<std::size_t>(root)] = true;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (auto [to, e] : g_.adj[static_cast<std::size_t>(v)]) {
                (void)e;
                if (base_[static_cast<std::size_t>(v)] == base_[static_cast<std::size_t>(to)] ||
                    match_[static_cast<std::size_t>(v)] == to)
                    continue;
                if (to == root ||
                    (match_[static_cast<std::size_t>(to)] != -1 &&
                     parent_[static_cast<std::size_t>(match_[static_cast<std::size_t>(to)])] != -1)) {
                    // Odd cycle: contract the blossom through the lca.
                    int b = lca(v, to);
                    std::fill(blossom_.begin(), blossom_.end(), false);
                    mark_path(v, b, to, q);
                    mark_path(to, b, v, q);
                    for (int i = 0; i < g_.n; ++i) {
                        if (blossom_[static_cast<std::size_t>(base_[static_cast<std::size_t>(i)])]) {
                            base_[static_cast<std::size_t>(i)] = b;
                            if (!used_[static_cast<std::size_t>(i)]) {
                                used_[static_cast<std::size_t>(i)] = true;
                                q.push(i);
                            }
                        }
                    }
                } else if (parent_[static_cast<std::size_t>(to)] == -1) {
                    parent_[static_cast<std::size_t>(to)] = v;
                    int mt = match_[static_cast<std::size_t>(to)];
                    if (mt == -1) return to;  // augmenting path found
                    used_[static_cast<std::size_t>(mt)] = true;
                    q.push(mt);
                }
            }
        }
        return -1;
    }

    void augment_from(int root) {
        int leaf = find_augmenting(root);
        if (leaf == -1) return;
        while (leaf != -1) {
            int pv = parent_[static_cast<std::size_t>(leaf)];
            int next = match_[static_cast<std::size_t>(pv)];
            match_[static_cast<std::size_t>(leaf)] = pv;
            match_[static_cast<std::size_t>(pv)] = leaf;
            leaf = next;
        }
    }
};

}  // namespace

Matching max_matching(const Graph& g) {
    std::vector<int> match = Blossom(g).run();
    Matching m;
    for (int v = 0; v < g.n; ++v) {
        int w = match[static_cast<std::size_t>(v)];
        if (w > v) m.edges.push_back({v, w});
    }
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

bool is_factor_critical(const Graph& g) {
    if (g.n == 0 || g.n % 2 == 0) return false;
    if (components(g).size() != 1) return false;
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(g.n) - 1);
    for (int x = 0; x < g.n; ++x) {
        rest.clear();
        for (int v = 0; v < g.n; ++v)
            if (v != x) rest.push_back(v);
        Graph sub = induced_subgraph(g, rest);
        if (2 * max_matching(sub).size() != g.n - 1) return false;
    }
    return true;
}

Matching near_perfect_matching(const Graph& g, int x) {
    if (x < 0 || x >= g.n) throw PreconditionError("near_perfect_matching: vertex out of range");
    if (g.n % 2 == 0) throw NoNearPerfectMatchingError("graph has even order");
    std::vector<int> rest, to_host;
    for (int v = 0; v < g.n; ++v)
        if (v != x) rest.push_back(v);
    Graph sub = induced_subgraph(g, rest, &to_host);
    Matching local = max_matching(sub);
    if (2 * local.size() != g.n - 1)
        throw NoNearPerfectMatchingError("g - x has no perfect matching");
    Matching m;
    for (auto [u, v] : local.edges) {
        int hu = to_host[static_cast<std::size_t>(u)], hv = to_host[static_cast<std::size_t>(v)];
        m.edges.push_back({std::min(hu, hv), std::max(hu, hv)});
    }
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

}  // namespace vdec
