#include "vdec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <tuple>
#include <unordered_map>

#include "vdec/rng.hpp"
#include "vdec/verify.hpp"

namespace vdec {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int fresh_palette_size(int k) { return 7 * k / 2 + 1; }  // floor(3.5k) + 1

void validate_pairs(const PairConstraints& pairs, int n, const char* who) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : pairs.pairs) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw PreconditionError(std::string(who) + ": malformed pair");
        if (seen[static_cast<std::size_t>(u)] || seen[static_cast<std::size_t>(v)])
            throw PreconditionError(std::string(who) + ": pairs are not disjoint");
        seen[static_cast<std::size_t>(u)] = 1;
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

long long choose_small(int k, int d) {
    if (d < 0 || d > k) return 0;
    long long r = 1;
    for (int i = 1; i <= d; ++i) r = r * (k - d + i) / i;
    return r;
}

}  // namespace

EdgeColoring path_recolor(const LinearForest& f, const EdgeColoring& base,
                          const ForbiddenSets& forb, const PairConstraints& pairs) {
    const Graph& g = base.host;
    int k = base.palette;
    if (k < 2) throw PreconditionError("path_recolor: base palette must be at least 2");
    if (f.n != g.n) throw PreconditionError("path_recolor: forest and base host differ");
    validate_pairs(pairs, g.n, "path_recolor");
    forest_edge_ids(g, f);  // throws if a path edge is missing from the host
    std::vector<int> fdeg = forest_degree(f);
    int P = fresh_palette_size(k);

    for (auto& [v, list] : forb.at) {
        if (v < 0 || v >= g.n || fdeg[static_cast<std::size_t>(v)] == 0)
            throw PreconditionError("path_recolor: forbidden key outside the forest");
        long long cap = 2 * choose_small(k, fdeg[static_cast<std::size_t>(v)]) - 1;
        if (static_cast<long long>(list.size()) > cap)
            throw PreconditionError("path_recolor: forbidden set larger than 2C(k,d)-1");
        for (int u : list)
            if (u < 0 || u >= g.n || u == v ||
                fdeg[static_cast<std::size_t>(u)] != fdeg[static_cast<std::size_t>(v)])
                throw PreconditionError("path_recolor: forbidden entry with mismatched forest degree");
    }

    // Working constraint map: symmetrized forbidden lists plus pair partners
    // with equal forest degree (unequal degrees separate by set size alone).
    std::vector<std::vector<int>> avoid(static_cast<std::size_t>(g.n));
    for (auto& [v, list] : forb.at)
        for (int u : list) {
            avoid[static_cast<std::size_t>(v)].push_back(u);
            avoid[static_cast<std::size_t>(u)].push_back(v);
        }
    for (auto [u, v] : pairs.pairs) {
        if (fdeg[static_cast<std::size_t>(u)] == 0 || fdeg[static_cast<std::size_t>(v)] == 0)
            continue;
        if (fdeg[static_cast<std::size_t>(u)] != fdeg[static_cast<std::size_t>(v)]) continue;
        avoid[static_cast<std::size_t>(u)].push_back(v);
        avoid[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : avoid) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    // Fresh color-sets per vertex; empty until the vertex's path is colored.
    std::vector<std::vector<int>> fresh(static_cast<std::size_t>(g.n));
    std::vector<char> colored(static_cast<std::size_t>(g.n), 0);

    std::vector<std::size_t> order(f.paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *std::min_element(f.paths[a].begin(), f.paths[a].end()) <
               *std::min_element(f.paths[b].begin(), f.paths[b].end());
    });

    EdgeColoring out;
    out.host = g;
    out.palette = P;
    out.color.assign(g.edges.size(), 0);

    for (std::size_t pi : order) {
        std::vector<int> path = f.paths[pi];
        if (path.front() > path.back()) std::reverse(path.begin(), path.end());
        int t = static_cast<int>(path.size()) - 1;  // edges 0..t-1

        // bad 1-sets / 2-sets from already-colored constraint partners.
        auto bad_single = [&](int v) {
            std::vector<char> bad(static_cast<std::size_t>(P + 1), 0);
            for (int u : avoid[static_cast<std::size_t>(v)])
                if (colored[static_cast<std::size_t>(u)] &&
                    fresh[static_cast<std::size_t>(u)].size() == 1)
                    bad[static_cast<std::size_t>(fresh[static_cast<std::size_t>(u)][0])] = 1;
            return bad;
        };
        auto bad_pair = [&](int v) {
            std::vector<std::vector<char>> bad(
                static_cast<std::size_t>(P + 1),
                std::vector<char>(static_cast<std::size_t>(P + 1), 0));
            for (int u : avoid[static_cast<std::size_t>(v)])
                if (colored[static_cast<std::size_t>(u)] &&
                    fresh[static_cast<std::size_t>(u)].size() == 2) {
                    int a = fresh[static_cast<std::size_t>(u)][0];
                    int b = fresh[static_cast<std::size_t>(u)][1];
                    bad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
                    bad[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
                }
            return bad;
        };

        // Forward candidate sets: S[0] dodges singleton clashes at the low
        // end; S[i] keeps colors with at least four compatible partners in
        // S[i-1] across the interior vertex path[i].
        std::vector<std::vector<char>> in_s(
            static_cast<std::size_t>(t),
            std::vector<char>(static_cast<std::size_t>(P + 1), 0));
        {
            std::vector<char> bad0 = bad_single(path[0]);
            for (int a = 1; a <= P; ++a)
                if (!bad0[static_cast<std::size_t>(a)]) in_s[0][static_cast<std::size_t>(a)] = 1;
        }
        std::vector<std::vector<std::vector<char>>> interior_bad;
        for (int i = 1; i < t; ++i) interior_bad.push_back(bad_pair(path[static_cast<std::size_t>(i)]));
        for (int i = 1; i < t; ++i) {
            auto& bp = interior_bad[static_cast<std::size_t>(i - 1)];
            for (int a = 1; a <= P; ++a) {
                int partners = 0;
                for (int b = 1; b <= P && partners < 4; ++b) {
                    if (b == a || !in_s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(b)])
                        continue;
                    if (!bp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) ++partners;
                }
                if (partners >= 4) in_s[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = 1;
            }
        }

        // Backward choices, lowest color first.
        std::vector<int> alpha(static_cast<std::size_t>(t), 0);
        std::vector<char> used(static_cast<std::size_t>(P + 1), 0);
        {
            std::vector<char> bad_end = bad_single(path[static_cast<std::size_t>(t)]);
            for (int a = 1; a <= P; ++a)
                if (in_s[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(a)] &&
                    !bad_end[static_cast<std::size_t>(a)]) {
                    alpha[static_cast<std::size_t>(t - 1)] = a;
                    break;
                }
            if (alpha[static_cast<std::size_t>(t - 1)] == 0)
                throw CandidateExhaustedError("path_recolor: no color for the last edge");
            used[static_cast<std::size_t>(alpha[static_cast<std::size_t>(t - 1)])] = 1;
        }
        for (int i = t - 2; i >= 0; --i) {
            auto& bp = interior_bad[static_cast<std::size_t>(i)];  // vertex path[i+1]
            int next = alpha[static_cast<std::size_t>(i + 1)];
            for (int a = 1; a <= P; ++a) {
                if (!in_s[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] ||
                    used[static_cast<std::size_t>(a)])
                    continue;
                if (bp[static_cast<std::size_t>(a)][static_cast<std::size_t>(next)]) continue;
                alpha[static_cast<std::size_t>(i)] = a;
                break;
            }
            if (alpha[static_cast<std::size_t>(i)] == 0)
                throw CandidateExhaustedError("path_recolor: no color for an inner edge");
            used[static_cast<std::size_t>(alpha[static_cast<std::size_t>(i)])] = 1;
        }

        for (int i = 0; i < t; ++i) {
            int e = g.edge_id(path[static_cast<std::size_t>(i)], path[static_cast<std::size_t>(i + 1)]);
            out.color[static_cast<std::size_t>(e)] = alpha[static_cast<std::size_t>(i)];
            fresh[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])].push_back(
                alpha[static_cast<std::size_t>(i)]);
            fresh[static_cast<std::size_t>(path[static_cast<std::size_t>(i + 1)])].push_back(
                alpha[static_cast<std::size_t>(i)]);
        }
        for (int v : path) {
            auto& s = fresh[static_cast<std::size_t>(v)];
            std::sort(s.begin(), s.end());
            colored[static_cast<std::size_t>(v)] = 1;
        }
    }

    // Self-check: every constraint holds and paths carry distinct colors.
    for (int v = 0; v < g.n; ++v)
        for (int u : avoid[static_cast<std::size_t>(v)])
            if (fresh[static_cast<std::size_t>(u)] == fresh[static_cast<std::size_t>(v)])
                throw StageError("path_recolor: produced clashing fresh sets");
    for (auto& p : f.paths) {
        std::vector<int> cols;
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            cols.push_back(out.color[static_cast<std::size_t>(g.edge_id(p[i], p[i + 1]))]);
        std::sort(cols.begin(), cols.end());
        if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
            throw StageError("path_recolor: repeated color within one path");
    }
    return out;
}

ConflictSelection select_conflict_edges(const Graph& g, const LinearForest& forest,
                                        const EdgeColoring& base) {
    if (forest.n != g.n || base.host.n != g.n || base.host.edges != g.edges)
        throw PreconditionError("select_conflict_edges: mismatched inputs");
    ColorSetTable table = color_set_table(base);
    for (auto& [s, cnt] : table)
        if (cnt >= 3)
            throw SemiVdViolatedError("select_conflict_edges: a color-set occurs on 3+ vertices");

    // Pairs of uncovered vertices sharing a color-set.
    std::unordered_map<ColorSet, int, ColorSetHash> first;
    std::vector<std::pair<int, int>> collisions;
    for (int v : forest.uncovered) {
        ColorSet s = color_set(base, v);
        auto [it, fresh_] = first.insert({s, v});
        if (!fresh_) collisions.push_back({it->second, v});
    }
    std::sort(collisions.begin(), collisions.end());

    struct Pick {
        int eid = -1;
        bool toward_forest = false;  // chosen edge leaves X (first two cases)
    };
    std::vector<Pick> pick(collisions.size());
    std::vector<int> times_chosen(static_cast<std::size_t>(g.n), 0);
    auto lowest_out = [&](int v) {
        int best = -1;
        for (auto [w, e] : g.adj[static_cast<std::size_t>(v)])
            if (forest.covers(w) && (best == -1 || e < best)) best = e;
        return best;
    };
    for (std::size_t i = 0; i < collisions.size(); ++i) {
        auto [u, v] = collisions[i];
        int e = lowest_out(u);
        if (e != -1) {
            pick[i] = {e, true};
        } else if ((e = lowest_out(v)) != -1) {
            pick[i] = {e, true};
        } else {
            if (g.degree(u) != 1)
                throw StageError("select_conflict_edges: in-X vertex without unique edge");
            pick[i] = {g.adj[static_cast<std::size_t>(u)][0].second, false};
        }
        auto [a, b] = g.edges[static_cast<std::size_t>(pick[i].eid)];
        ++times_chosen[static_cast<std::size_t>(a)];
        ++times_chosen[static_cast<std::size_t>(b)];
    }

    // A pair whose chosen edge leaves X at u while v is already hit by an
    // in-X edge of another pair would make the degree pattern {1,1}; drop
    // the chosen edge and let that in-X edge serve both pairs.
    for (std::size_t i = 0; i < collisions.size(); ++i) {
        if (pick[i].eid == -1 || !pick[i].toward_forest) continue;
        auto [u, v] = collisions[i];
        auto [a, b] = g.edges[static_cast<std::size_t>(pick[i].eid)];
        int x_end = forest.covers(a) ? b : a;
        if (x_end != u) continue;  // edge was chosen at v; u has degree 0
        if (times_chosen[static_cast<std::size_t>(u)] == 1 && times_chosen[static_cast<std::size_t>(v)] >= 1) {
            --times_chosen[static_cast<std::size_t>(a)];
            --times_chosen[static_cast<std::size_t>(b)];
            pick[i].eid = -1;
        }
    }

    ConflictSelection res;
    res.colliding_pairs.pairs = collisions;
    for (auto& p : pick)
        if (p.eid != -1) res.chosen_edges.push_back(p.eid);
    std::sort(res.chosen_edges.begin(), res.chosen_edges.end());
    res.chosen_edges.erase(std::unique(res.chosen_edges.begin(), res.chosen_edges.end()), res.chosen_edges.end());
    std::vector<std::pair<int, int>> picked;
    for (int e : res.chosen_edges) picked.push_back(g.edges[static_cast<std::size_t>(e)]);
    res.chosen_subgraph = Graph::from_edges(g.n, std::move(picked));

    // Postcondition checks from the construction's analysis.
    for (auto [u, v] : collisions) {
        int a = res.chosen_subgraph.degree(u), b = res.chosen_subgraph.degree(v);
        if (a < b) std::swap(a, b);
        bool ok = (a == 1 && b == 0) || (a == 2 && b == 0) || (a == 2 && b == 1);
        if (!ok)
            throw StageError("select_conflict_edges: degree pattern {" + std::to_string(a) +
                             "," + std::to_string(b) + "} outside the allowed set");
    }
    int cap = std::max(2, g.max_degree() - 2);
    if (res.chosen_subgraph.max_degree() > cap)
        throw StageError("select_conflict_edges: selection exceeds the degree cap");
    std::vector<int> side(static_cast<std::size_t>(g.n), -1);
    for (int v = 0; v < g.n; ++v) {
        if (side[static_cast<std::size_t>(v)] != -1 || res.chosen_subgraph.degree(v) == 0) continue;
        side[static_cast<std::size_t>(v)] = 0;
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [w, e] : res.chosen_subgraph.adj[static_cast<std::size_t>(x)]) {
                (void)e;
                if (side[static_cast<std::size_t>(w)] == -1) {
                    side[static_cast<std::size_t>(w)] = 1 - side[static_cast<std::size_t>(x)];
                    stack.push_back(w);
                } else if (side[static_cast<std::size_t>(w)] == side[static_cast<std::size_t>(x)]) {
                    throw StageError("select_conflict_edges: selection is not bipartite");
                }
            }
        }
    }
    return res;
}

EdgeColoring long_path_3color(const PathPacking& paths, const PairConstraints& pairs) {
    int n = 0;
    for (auto& p : paths.paths) {
        if (p.size() < 3)
            throw PreconditionError("long_path_3color: every path needs at least two edges");
        for (int v : p) {
            if (v < 0) throw PreconditionError("long_path_3color: negative vertex id");
            n = std::max(n, v + 1);
        }
    }
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, int>> union_edges;
    for (auto& p : paths.paths)
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (used[static_cast<std::size_t>(p[i])])
                throw PreconditionError("long_path_3color: paths are not vertex-disjoint");
            used[static_cast<std::size_t>(p[i])] = 1;
            if (i > 0) union_edges.push_back({p[i - 1], p[i]});
        }
    validate_pairs(pairs, std::max(n, 1), "long_path_3color");
    Graph host = Graph::from_edges(n, std::move(union_edges));

    EdgeColoring out;
    out.host = host;
    out.palette = 3;
    out.color.assign(host.edges.size(), 0);

    // Component order: increasing smallest vertex. Constrained components
    // (holding a pair endpoint) are searched; the rest alternate 1,2.
    std::vector<std::size_t> order(paths.paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *std::min_element(paths.paths[a].begin(), paths.paths[a].end()) <
               *std::min_element(paths.paths[b].begin(), paths.paths[b].end());
    });
    std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> oriented;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        std::vector<int> p = paths.paths[order[oi]];
        if (p.front() > p.back()) std::reverse(p.begin(), p.end());
        for (int v : p) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(oi);
        oriented.push_back(std::move(p));
    }

    std::vector<char> constrained(oriented.size(), 0);
    // Pair checked at the later of its two components (or within one).
    std::vector<std::vector<std::pair<int, int>>> checks(oriented.size());
    for (auto [u, v] : pairs.pairs) {
        int cu = comp_of[static_cast<std::size_t>(u)];
        int cv = comp_of[static_cast<std::size_t>(v)];
        if (cu == -1 || cv == -1) continue;  // endpoint off the path system
        constrained[static_cast<std::size_t>(cu)] = 1;
        constrained[static_cast<std::size_t>(cv)] = 1;
        checks[static_cast<std::size_t>(std::max(cu, cv))].push_back({u, v});
    }

    // candidate index -> edge colors: the first edge picks from {1,2,3},
    // every later edge from the two colors differing from the previous one,
    // so a path with E edges has exactly 3 * 2^(E-1) proper colorings.
    auto decode = [](long long idx, std::size_t edges) {
        std::vector<int> cols(edges);
        cols[0] = static_cast<int>(idx % 3) + 1;
        idx /= 3;
        for (std::size_t j = 1; j < edges; ++j) {
            int want = static_cast<int>(idx % 2);
            idx /= 2;
            for (int cand = 1; cand <= 3; ++cand) {
                if (cand == cols[j - 1]) continue;
                if (want-- == 0) {
                    cols[j] = cand;
                    break;
                }
            }
        }
        return cols;
    };

    std::vector<std::vector<int>> comp_cols(oriented.size());
    auto vertex_set = [&](int v) {
        std::vector<int> s;
        const auto& p = oriented[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(v)])];
        const auto& cols = comp_cols[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(v)])];
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] != v) continue;
            if (i > 0) s.push_back(cols[i - 1]);
            if (i + 1 < p.size()) s.push_back(cols[i]);
            break;
        }
        std::sort(s.begin(), s.end());
        return s;
    };

    std::vector<std::size_t> search_comps;
    for (std::size_t oi = 0; oi < oriented.size(); ++oi) {
        if (constrained[oi])
            search_comps.push_back(oi);
        else
            comp_cols[oi] = decode(0, oriented[oi].size() - 1);
    }

    // One pass colors the constrained components in order, each taking its
    // first candidate compatible with everything already fixed. A component
    // with no compatible candidate aborts the pass and the whole search
    // restarts with candidate enumeration rotated by a pass-derived offset,
    // so later passes make different early choices. The first pass starts
    // every rotation at zero, which keeps easy instances on the lowest
    // candidates. Cross-component backtracking is deliberately avoided: a
    // late conflict usually traces to a far-earlier component, which makes
    // chronological backtracking thrash.
    const int max_passes = 1000;
    bool done = search_comps.empty();
    for (int pass = 0; pass < max_passes && !done; ++pass) {
        done = true;
        for (std::size_t oi : search_comps) {
            std::size_t edges = oriented[oi].size() - 1;
            long long total = 3LL << (edges - 1);
            long long start =
                pass == 0 ? 0
                          : static_cast<long long>(Rng::derive_seed(
                                static_cast<std::uint64_t>(pass),
                                static_cast<std::uint64_t>(oi)) %
                            static_cast<std::uint64_t>(total));
            bool found = false;
            for (long long t = 0; t < total && !found; ++t) {
                comp_cols[oi] = decode((start + t) % total, edges);
                found = true;
                for (auto [u, v] : checks[oi]) {
                    if (vertex_set(u) == vertex_set(v)) {
                        found = false;
                        break;
                    }
                }
            }
            if (!found) {
                done = false;
                break;
            }
        }
    }
    if (!done)
        throw SearchExhaustedError("long_path_3color: no assignment satisfies the pairs");

    for (std::size_t oi = 0; oi < oriented.size(); ++oi) {
        const auto& p = oriented[oi];
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            int e = host.edge_id(p[i], p[i + 1]);
            out.color[static_cast<std::size_t>(e)] = comp_cols[oi][i];
        }
    }
    if (!out.total() || !out.proper())
        throw StageError("long_path_3color: produced an improper coloring");
    return out;
}

namespace {

EdgeColoring empty_coloring(const Graph& g) {
    EdgeColoring c;
    c.host = g;
    c.palette = 0;
    c.color.assign(g.edges.size(), 0);
    return c;
}

PipelineStage make_stage(const char* name, int lo, int hi, long long nv, long long ne,
                         double ms, std::vector<std::uint64_t> seeds = {}) {
    PipelineStage s;
    s.name = name;
    s.palette_lo = lo;
    s.palette_hi = hi;
    s.vertices = nv;
    s.edges = ne;
    s.elapsed_ms = ms;
    s.seeds = std::move(seeds);
    return s;
}

}  // namespace

EdgeColoring general_vdec(const Graph& g, std::uint64_t seed, PipelineTrace* trace,
                          int exact_limit, int restarts) {
    if (!is_vdec(g))
        throw NotVdecError("general_vdec: graph has an isolated edge or two isolated vertices");
    PipelineTrace local;
    PipelineTrace& tr = trace ? *trace : local;
    tr = PipelineTrace{};
    tr.master_seed = seed;

    if (g.edge_count() == 0) {
        tr.forest = LinearForest::from_paths(g, {});
        tr.base = empty_coloring(g);
        tr.recolored = empty_coloring(g);
        return empty_coloring(g);
    }

    int big_k = k_lower_bound(g);
    int k = big_k + 1;
    if (k < 2) throw StageError("general_vdec: palette collapsed below 2");
    if (big_k < g.max_degree())
        throw StageError("general_vdec: degree profile beat the binomial bound");

    auto t0 = Clock::now();
    std::uint64_t forest_seed = Rng::derive_seed(seed, 0);
    LinearForest f = find_linear_forest(g, forest_seed, exact_limit, restarts);
    tr.forest = f;
    tr.stages.push_back(
        make_stage("linear_forest", 0, 0, g.n, g.edge_count(), ms_since(t0), {forest_seed}));

    t0 = Clock::now();
    EdgeColoring vz = vizing_color(g);
    tr.stages.push_back(make_stage("vizing", 1, vz.palette, g.n, g.edge_count(), ms_since(t0)));

    t0 = Clock::now();
    vz.palette = k;
    std::uint64_t refine_seed = Rng::derive_seed(seed, 1);
    EdgeColoring refined = semi_vd_refine(vz, refine_seed);
    tr.base = refined;
    tr.stages.push_back(
        make_stage("semi_vd_refine", 1, k, g.n, g.edge_count(), ms_since(t0), {refine_seed}));

    t0 = Clock::now();
    ConflictSelection sel = select_conflict_edges(g, f, refined);
    EdgeColoring shifted = refined;
    shifted.palette = 2 * k;
    for (int e : sel.chosen_edges) shifted.color[static_cast<std::size_t>(e)] += k;
    tr.shifted = shifted;
    tr.stages.push_back(make_stage("conflict_shift", k + 1, 2 * k, g.n,
                                   static_cast<long long>(sel.chosen_edges.size()), ms_since(t0)));

    t0 = Clock::now();
    // Residual collisions and the forbidden sets over forest vertices that
    // agree in host degree, forest degree, and colors off the forest.
    std::vector<int> fdeg = forest_degree(f);
    std::vector<char> on_forest_edge(g.edges.size(), 0);
    for (int e : forest_edge_ids(g, f)) on_forest_edge[static_cast<std::size_t>(e)] = 1;

    std::unordered_map<ColorSet, std::vector<int>, ColorSetHash> by_set;
    for (int v = 0; v < g.n; ++v) by_set[color_set(shifted, v)].push_back(v);
    PairConstraints residual;
    for (auto& [s, vs] : by_set) {
        if (vs.size() >= 3)
            throw StageError("general_vdec: shift stage broke the two-per-set bound");
        if (vs.size() == 2) residual.pairs.push_back({vs[0], vs[1]});
    }
    std::sort(residual.pairs.begin(), residual.pairs.end());

    std::map<std::tuple<int, int, std::vector<int>>, std::vector<int>> groups;
    for (int v = 0; v < g.n; ++v) {
        if (fdeg[static_cast<std::size_t>(v)] == 0) continue;
        std::vector<int> outside;
        for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
            (void)w;
            if (!on_forest_edge[static_cast<std::size_t>(e)])
                outside.push_back(shifted.color[static_cast<std::size_t>(e)]);
        }
        std::sort(outside.begin(), outside.end());
        groups[{g.degree(v), fdeg[static_cast<std::size_t>(v)], std::move(outside)}].push_back(v);
    }
    ForbiddenSets forb;
    for (auto& [key, vs] : groups) {
        if (vs.size() < 2) continue;
        std::vector<ColorSet> sets;
        sets.reserve(vs.size());
        for (int v : vs) sets.push_back(color_set(shifted, v));
        for (std::size_t i = 0; i < vs.size(); ++i) {
            std::vector<int> others;
            for (std::size_t j = 0; j < vs.size(); ++j)
                if (j != i && !(sets[i] == sets[j])) others.push_back(vs[j]);
            if (others.empty()) continue;
            long long cap =
                2 * (choose_small(k, fdeg[static_cast<std::size_t>(vs[i])]) - 1);
            if (static_cast<long long>(others.size()) > cap)
                throw StageError("general_vdec: forbidden set exceeded 2(C(k,d)-1)");
            forb.at[vs[i]] = std::move(others);
        }
    }

    EdgeColoring forest_slice = empty_coloring(g);
    forest_slice.palette = k;
    for (int e = 0; e < g.edge_count(); ++e)
        if (on_forest_edge[static_cast<std::size_t>(e)])
            forest_slice.color[static_cast<std::size_t>(e)] = shifted.color[static_cast<std::size_t>(e)];
    EdgeColoring fresh = path_recolor(f, forest_slice, forb, residual);
    tr.recolored = fresh;
    int P = fresh_palette_size(k);
    tr.stages.push_back(make_stage("path_recolor", 2 * k + 1, 2 * k + P, g.n,
                                   static_cast<long long>(forest_edge_ids(g, f).size()),
                                   ms_since(t0)));

    t0 = Clock::now();
    EdgeColoring out = shifted;
    out.palette = 2 * k + P;
    for (int e = 0; e < g.edge_count(); ++e)
        if (on_forest_edge[static_cast<std::size_t>(e)])
            out.color[static_cast<std::size_t>(e)] =
                2 * k + fresh.color[static_cast<std::size_t>(e)];
    VerificationReport rep = verify_vd(g, out);
    tr.stages.push_back(make_stage("verify", 1, out.palette, g.n, g.edge_count(), ms_since(t0)));
    if (!rep.passed())
        throw VerificationError("general_vdec: final coloring failed " +
                                rep.violations.front().check);
    return out;
}

EdgeColoring regular_vdec(const Graph& g, std::uint64_t seed, PipelineTrace* trace,
                          int exact_limit, int restarts) {
    int d = g.max_degree();
    if (g.n < 1 || g.min_degree() != d)
        throw PreconditionError("regular_vdec: graph is not regular");
    if (g.n < 256)
        throw PreconditionError("regular_vdec: needs log2 n >= 8, so at least 256 vertices");
    if ((std::uint64_t{1} << std::min(d, 62)) < static_cast<std::uint64_t>(g.n))
        throw PreconditionError("regular_vdec: needs degree >= log2 n");
    if (d == g.n - 1) throw PreconditionError("regular_vdec: complete graphs are out of scope");

    PipelineTrace local;
    PipelineTrace& tr = trace ? *trace : local;
    tr = PipelineTrace{};
    tr.master_seed = seed;

    int k = k_lower_bound(g);
    if (k < d + 2) throw StageError("regular_vdec: palette bound fell below degree + 2");

    auto t0 = Clock::now();
    std::uint64_t forest_seed = Rng::derive_seed(seed, 0);
    LinearForest f = find_linear_forest(g, forest_seed, exact_limit, restarts);
    if (!f.uncovered.empty())
        throw StageError("regular_vdec: forest left a vertex of a regular graph uncovered");
    tr.forest = f;
    tr.stages.push_back(
        make_stage("linear_forest", 0, 0, g.n, g.edge_count(), ms_since(t0), {forest_seed}));

    std::vector<int> fdeg = forest_degree(f);
    long long endpoints = 0, interiors = 0;
    for (int v = 0; v < g.n; ++v)
        (fdeg[static_cast<std::size_t>(v)] == 1 ? endpoints : interiors) += 1;
    if (3 * endpoints > 2 * g.n || 5 * interiors > 3 * g.n)
        throw StageError("regular_vdec: forest degree classes exceed the counting room");

    t0 = Clock::now();
    Graph off_forest = remove_edges(g, forest_edge_ids(g, f));
    EdgeColoring off_colors = vizing_color(off_forest);
    tr.stages.push_back(make_stage("vizing", 1, off_colors.palette, off_forest.n, off_forest.edge_count(), ms_since(t0)));

    t0 = Clock::now();
    off_colors.palette = k;
    std::uint64_t refine_seed = Rng::derive_seed(seed, 1);
    EdgeColoring refined = semi_vd_refine(off_colors, refine_seed);
    tr.base = refined;
    tr.stages.push_back(
        make_stage("semi_vd_refine", 1, k, off_forest.n, off_forest.edge_count(), ms_since(t0), {refine_seed}));

    t0 = Clock::now();
    std::unordered_map<ColorSet, std::vector<int>, ColorSetHash> by_set;
    for (int v = 0; v < g.n; ++v) by_set[color_set(refined, v)].push_back(v);
    PairConstraints residual;
    for (auto& [s, vs] : by_set) {
        if (vs.size() >= 3)
            throw StageError("regular_vdec: refinement left a color-set on 3+ vertices");
        if (vs.size() == 2) residual.pairs.push_back({vs[0], vs[1]});
    }
    std::sort(residual.pairs.begin(), residual.pairs.end());

    PathPacking packing{f.paths};
    EdgeColoring fresh = long_path_3color(packing, residual);
    tr.recolored = fresh;
    tr.stages.push_back(make_stage("long_path_3color", k + 1, k + 3, g.n,
                                   static_cast<long long>(forest_edge_ids(g, f).size()),
                                   ms_since(t0)));

    t0 = Clock::now();
    EdgeColoring out;
    out.host = g;
    out.palette = k + 3;
    out.color.assign(g.edges.size(), 0);
    std::vector<char> on_forest_edge(g.edges.size(), 0);
    for (int e : forest_edge_ids(g, f)) on_forest_edge[static_cast<std::size_t>(e)] = 1;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        if (on_forest_edge[static_cast<std::size_t>(e)]) {
            int ue = fresh.host.edge_id(u, v);
            out.color[static_cast<std::size_t>(e)] =
                k + fresh.color[static_cast<std::size_t>(ue)];
        } else {
            int off_eid = off_forest.edge_id(u, v);
            out.color[static_cast<std::size_t>(e)] = refined.color[static_cast<std::size_t>(off_eid)];
        }
    }
    VerificationReport rep = verify_vd(g, out);
    tr.stages.push_back(make_stage("verify", 1, out.palette, g.n, g.edge_count(), ms_since(t0)));
    if (!rep.passed())
        throw VerificationError("regular_vdec: final coloring failed " +
                                rep.violations.front().check);
    return out;
}

}  // namespace vdec
