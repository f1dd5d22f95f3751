#include "vdec/verify.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_map>

#include "vdec/rng.hpp"

namespace vdec {

namespace {

void check_assignment(const Graph& g, const EdgeColoring& c, VerificationReport& rep) {
    if (c.palette < 0) rep.violations.push_back({"negative_palette", {}, {}});
    for (int e = 0; e < g.edge_count(); ++e) {
        int col = c.color[static_cast<std::size_t>(e)];
        if (col < 1 || col > c.palette) rep.violations.push_back({"edge_color_out_of_range", {}, {e}});
    }
    for (int v = 0; v < g.n; ++v) {
        auto& inc = g.adj[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                int e1 = inc[i].second, e2 = inc[j].second;
                int c1 = c.color[static_cast<std::size_t>(e1)];
                int c2 = c.color[static_cast<std::size_t>(e2)];
                if (c1 >= 1 && c1 == c2)
                    rep.violations.push_back({"incident_edges_share_color", {v}, {e1, e2}});
            }
    }
}

}  // namespace

VerificationReport verify_proper(const Graph& g, const EdgeColoring& c) {
    VerificationReport rep;
    if (c.host.n != g.n || c.host.edges != g.edges ||
        c.color.size() != g.edges.size()) {
        rep.violations.push_back({"coloring_host_mismatch", {}, {}});
        return rep;
    }
    check_assignment(g, c, rep);
    return rep;
}

VerificationReport verify_vd(const Graph& g, const EdgeColoring& c) {
    VerificationReport rep = verify_proper(g, c);
    if (!rep.passed()) return rep;
    std::unordered_map<ColorSet, std::vector<int>, ColorSetHash> holders;
    for (int v = 0; v < g.n; ++v) holders[color_set(c, v)].push_back(v);
    std::vector<std::pair<int, int>> bad;
    for (auto& [s, vs] : holders)
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j) bad.emplace_back(vs[i], vs[j]);
    std::sort(bad.begin(), bad.end());
    for (auto& [u, v] : bad) rep.violations.push_back({"equal_color_sets", {u, v}, {}});
    return rep;
}

VerificationReport verify_semi_vd(const Graph& g, const EdgeColoring& c) {
    VerificationReport rep = verify_proper(g, c);
    if (!rep.passed()) return rep;
    std::unordered_map<ColorSet, std::vector<int>, ColorSetHash> holders;
    for (int v = 0; v < g.n; ++v) holders[color_set(c, v)].push_back(v);
    std::vector<std::vector<int>> bad;
    for (auto& [s, vs] : holders)
        if (vs.size() >= 3) bad.push_back(vs);
    std::sort(bad.begin(), bad.end());
    for (auto& vs : bad) rep.violations.push_back({"color_set_on_three_vertices", vs, {}});
    return rep;
}

VerificationReport verify_packing(const Graph& g, const PathPacking& p,
                                  const std::vector<int>& allowed_lengths) {
    VerificationReport rep;
    std::vector<char> used(static_cast<std::size_t>(g.n), 0);
    for (auto& path : p.paths) {
        if (std::find(allowed_lengths.begin(), allowed_lengths.end(),
                      static_cast<int>(path.size())) == allowed_lengths.end())
            rep.violations.push_back({"path_length_not_allowed", path, {}});
        for (std::size_t i = 0; i < path.size(); ++i) {
            int v = path[i];
            if (v < 0 || v >= g.n) {
                rep.violations.push_back({"vertex_out_of_range", {v}, {}});
                continue;
            }
            if (used[static_cast<std::size_t>(v)])
                rep.violations.push_back({"paths_overlap", {v}, {}});
            used[static_cast<std::size_t>(v)] = 1;
            if (i > 0 && path[i - 1] >= 0 && path[i - 1] < g.n && !g.has_edge(path[i - 1], v))
                rep.violations.push_back({"path_edge_missing", {path[i - 1], v}, {}});
        }
    }
    return rep;
}

VerificationReport verify_forest(const Graph& g, const LinearForest& f) {
    VerificationReport rep;
    if (f.n != g.n) {
        rep.violations.push_back({"forest_host_mismatch", {}, {}});
        return rep;
    }
    PathPacking as_packing{f.paths};
    rep = verify_packing(g, as_packing, {3, 4, 5});

    std::vector<char> covered(static_cast<std::size_t>(g.n), 0);
    for (auto& p : f.paths)
        for (int v : p)
            if (v >= 0 && v < g.n) covered[static_cast<std::size_t>(v)] = 1;
    std::vector<int> expect_uncovered;
    for (int v = 0; v < g.n; ++v)
        if (!covered[static_cast<std::size_t>(v)]) expect_uncovered.push_back(v);
    if (expect_uncovered != f.uncovered)
        rep.violations.push_back({"uncovered_list_mismatch", {}, {}});

    std::vector<int> fdeg = forest_degree(f);
    int dmax = g.max_degree();
    for (int v : expect_uncovered) {
        // Leftover vertices must induce isolated vertices and edges, with
        // degree at most (max degree + 1) / 2 in the host.
        int loose = 0;
        for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
            (void)e;
            if (!covered[static_cast<std::size_t>(w)]) ++loose;
        }
        if (loose > 1) rep.violations.push_back({"leftover_not_isolated", {v}, {}});
        if (2 * g.degree(v) > dmax + 1)
            rep.violations.push_back({"uncovered_degree_too_high", {v}, {}});
        for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
            (void)e;
            if (covered[static_cast<std::size_t>(w)] && fdeg[static_cast<std::size_t>(w)] != 2)
                rep.violations.push_back({"covered_neighbor_not_interior", {v, w}, {}});
        }
    }
    return rep;
}

namespace {

// Depth-first search for a vertex-distinguishing proper coloring with k
// colors. Colors are introduced in canonical order and vertices whose
// incident edges are all colored are checked against previously finished
// color sets, so permutation-equivalent branches are pruned.
struct VdSearch {
    const Graph& g;
    int k;
    std::vector<int> color;          // per edge, 0 = unset
    std::vector<std::uint64_t> used; // per vertex bitmask over colors 1..k (k <= 63)
    std::vector<int> remaining;      // uncolored incident edges per vertex
    std::unordered_map<ColorSet, int, ColorSetHash> finished;

    VdSearch(const Graph& graph, int palette)
        : g(graph),
          k(palette),
          color(static_cast<std::size_t>(graph.edge_count()), 0),
          used(static_cast<std::size_t>(graph.n), 0),
          remaining(static_cast<std::size_t>(graph.n), 0) {
        for (int v = 0; v < graph.n; ++v)
            remaining[static_cast<std::size_t>(v)] =
                static_cast<int>(graph.adj[static_cast<std::size_t>(v)].size());
    }

    ColorSet set_of(int v) const {
        ColorSet s;
        for (int c = 1; c <= k; ++c)
            if (used[static_cast<std::size_t>(v)] >> (c - 1) & 1) s.insert(c);
        return s;
    }

    bool run(int e, int max_used) {
        if (e == g.edge_count()) return true;
        auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        int limit = std::min(k, max_used + 1);
        for (int c = 1; c <= limit; ++c) {
            std::uint64_t bit = 1ULL << (c - 1);
            if ((used[static_cast<std::size_t>(u)] | used[static_cast<std::size_t>(v)]) & bit)
                continue;
            color[static_cast<std::size_t>(e)] = c;
            used[static_cast<std::size_t>(u)] |= bit;
            used[static_cast<std::size_t>(v)] |= bit;
            --remaining[static_cast<std::size_t>(u)];
            --remaining[static_cast<std::size_t>(v)];
            bool ok = true;
            std::array<ColorSet, 2> added;
            int added_count = 0;
            for (int w : {u, v}) {
                if (remaining[static_cast<std::size_t>(w)] != 0) continue;
                ColorSet s = set_of(w);
                if (finished.count(s)) {
                    ok = false;
                    break;
                }
                finished.insert({s, w});
                added[static_cast<std::size_t>(added_count++)] = s;
            }
            if (ok && run(e + 1, std::max(max_used, c))) return true;
            for (int i = 0; i < added_count; ++i)
                finished.erase(added[static_cast<std::size_t>(i)]);
            ++remaining[static_cast<std::size_t>(u)];
            ++remaining[static_cast<std::size_t>(v)];
            used[static_cast<std::size_t>(u)] &= ~bit;
            used[static_cast<std::size_t>(v)] &= ~bit;
            color[static_cast<std::size_t>(e)] = 0;
        }
        return false;
    }
};

}  // namespace

std::optional<int> exact_chi_vd(const Graph& g, int k_max, EdgeColoring* witness) {
    if (!is_vdec(g))
        throw NotVdecError("exact_chi_vd: graph has isolated-edge components or two isolated vertices");
    int lo = k_lower_bound(g);
    int hi = k_max < 0 ? lo + 3 : k_max;
    if (g.edge_count() == 0) {
        if (witness) {
            witness->host = g;
            witness->palette = 0;
            witness->color.clear();
        }
        return 0;
    }
    for (int k = std::max(1, lo); k <= hi; ++k) {
        if (k > 63) throw PreconditionError("exact_chi_vd: palette larger than 63 unsupported");
        VdSearch search(g, k);
        // An isolated vertex owns the empty set; seed it so no finished
        // vertex may duplicate it (at most one exists in a vdec graph).
        for (int v = 0; v < g.n; ++v)
            if (g.degree(v) == 0) search.finished.insert({ColorSet{}, v});
        if (search.run(0, 0)) {
            if (witness) {
                witness->host = g;
                witness->palette = k;
                witness->color = search.color;
            }
            return k;
        }
    }
    return std::nullopt;
}

std::optional<int> randomized_vd_upper(const Graph& g, int k_max, std::uint64_t seed,
                                       int tries_per_k) {
    if (!is_vdec(g))
        throw NotVdecError("randomized_vd_upper: graph has isolated-edge components or two isolated vertices");
    if (g.edge_count() == 0) return 0;
    Rng rng(seed);
    std::vector<int> order(static_cast<std::size_t>(g.edge_count()));
    for (int k = std::max(1, k_lower_bound(g)); k <= k_max; ++k) {
        std::vector<int> feasible;
        feasible.reserve(static_cast<std::size_t>(k));
        for (int t = 0; t < tries_per_k; ++t) {
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            EdgeColoring c;
            c.host = g;
            c.palette = k;
            c.color.assign(g.edges.size(), 0);
            bool stuck = false;
            for (int e : order) {
                auto [u, v] = g.edges[static_cast<std::size_t>(e)];
                // Uniform choice over every feasible color: a fixed preference
                // order can never reach colorings that avoid reusing early
                // colors (e.g. the all-distinct optimum on C5).
                feasible.clear();
                for (int cand = 1; cand <= k; ++cand) {
                    bool clash = false;
                    for (int w : {u, v}) {
                        for (auto [x, e2] : g.adj[static_cast<std::size_t>(w)]) {
                            (void)x;
                            if (c.color[static_cast<std::size_t>(e2)] == cand) {
                                clash = true;
                                break;
                            }
                        }
                        if (clash) break;
                    }
                    if (!clash) feasible.push_back(cand);
                }
                if (feasible.empty()) {
                    stuck = true;
                    break;
                }
                std::size_t at =
                    static_cast<std::size_t>(rng.uniform(static_cast<int>(feasible.size())));
                c.color[static_cast<std::size_t>(e)] = feasible[at];
            }
            if (stuck) continue;
            if (verify_vd(g, c).passed()) return k;
        }
    }
    return std::nullopt;
}

}  // namespace vdec
