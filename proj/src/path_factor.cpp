#include "vdec/path_factor.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "vdec/matching.hpp"
#include "vdec/rng.hpp"
#include "vdec/verify.hpp"

namespace vdec {

int SunDecomposition::pendant_of(int core_vertex) const {
    for (std::size_t i = 0; i < core.size(); ++i)
        if (core[i] == core_vertex) return pendant[i];
    throw PreconditionError("pendant_of: not a core vertex");
}

std::optional<SunDecomposition> is_sun(const Graph& component) {
    const Graph& g = component;
    if (g.n == 0 || components(g).size() != 1)
        throw PreconditionError("is_sun: input must be one connected component");
    SunDecomposition d;
    d.host = g;
    if (g.n == 1) {
        d.kind = SunKind::k1;
        return d;
    }
    if (g.n == 2) {
        d.kind = SunKind::k2;
        return d;
    }
    d.kind = SunKind::big;
    // Candidate pendants are the degree-1 vertices; every core vertex must
    // own exactly one and the cores must induce a factor-critical graph.
    std::vector<int> core;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) != 1) core.push_back(v);
    if (2 * static_cast<int>(core.size()) != g.n) return std::nullopt;
    for (int v : core) {
        int owned = -1;
        for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
            (void)e;
            if (g.degree(w) == 1) {
                if (owned != -1) return std::nullopt;
                owned = w;
            }
        }
        if (owned == -1) return std::nullopt;
        d.pendant.push_back(owned);
    }
    if (!is_factor_critical(induced_subgraph(g, core))) return std::nullopt;
    d.core = core;
    return d;
}

int sun_count(const Graph& g) {
    int cnt = 0;
    for (auto& comp : components(g))
        if (is_sun(induced_subgraph(g, comp))) ++cnt;
    return cnt;
}

DeficiencyCertificate deficiency(const Graph& g, int exact_limit) {
    if (g.n > exact_limit)
        throw SizeExceededError("deficiency: " + std::to_string(g.n) +
                                " vertices exceed the exact limit " +
                                std::to_string(exact_limit));
    DeficiencyCertificate best;
    best.value = sun_count(g);
    std::vector<char> in_s(static_cast<std::size_t>(g.n), 0);
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(g.n));
    for (int size = 1; size <= g.n; ++size) {
        // Each sun keeps at least one vertex, so no set of this size or
        // larger can beat the current best once n - 3*size falls to it.
        if (static_cast<long long>(g.n) - 3LL * size <= best.value) break;
        std::vector<int> idx(static_cast<std::size_t>(size));
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            for (int v : idx) in_s[static_cast<std::size_t>(v)] = 1;
            rest.clear();
            for (int v = 0; v < g.n; ++v)
                if (!in_s[static_cast<std::size_t>(v)]) rest.push_back(v);
            for (int v : idx) in_s[static_cast<std::size_t>(v)] = 0;
            long long val = sun_count(induced_subgraph(g, rest)) - 2LL * size;
            if (val > best.value) {
                best.value = val;
                best.s = idx;
            }
            int i = size - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == g.n - size + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

bool kaneko_condition(const Graph& g, int exact_limit) {
    return deficiency(g, exact_limit).value <= 0;
}

PathPacking sun_packing(const SunDecomposition& d, SunPackMode mode, std::optional<int> w) {
    if (d.kind != SunKind::big)
        throw PreconditionError("sun_packing: decomposition is not a big sun");
    int x = w.value_or(d.core.front());
    if (!std::binary_search(d.core.begin(), d.core.end(), x))
        throw PreconditionError("sun_packing: chosen vertex is not in the core");

    std::vector<int> to_comp;
    Graph core_g = induced_subgraph(d.host, d.core, &to_comp);
    int lx = static_cast<int>(std::lower_bound(to_comp.begin(), to_comp.end(), x) -
                              to_comp.begin());
    Matching m = near_perfect_matching(core_g, lx);
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, b] : m.edges)
        pairs.push_back({to_comp[static_cast<std::size_t>(a)],
                         to_comp[static_cast<std::size_t>(b)]});
    std::sort(pairs.begin(), pairs.end());

    PathPacking out;
    if (mode == SunPackMode::uncover_core_vertex) {
        for (auto [a, b] : pairs)
            out.paths.push_back({d.pendant_of(a), a, b, d.pendant_of(b)});
        return out;
    }
    // uncover_leaf: route a P5 through x via its lowest-id core neighbor,
    // leaving only that neighbor's pendant uncovered.
    int aj = -1;
    for (auto [nb, e] : d.host.adj[static_cast<std::size_t>(x)]) {
        (void)e;
        if (d.host.degree(nb) != 1) {
            aj = nb;
            break;
        }
    }
    if (aj == -1) throw StageError("sun_packing: core vertex with no core neighbor");
    for (auto [a, b] : pairs) {
        if (a == aj || b == aj) {
            int bj = (a == aj) ? b : a;
            out.paths.push_back({d.pendant_of(x), x, aj, bj, d.pendant_of(bj)});
        } else {
            out.paths.push_back({d.pendant_of(a), a, b, d.pendant_of(b)});
        }
    }
    return out;
}

namespace {

// Simple (deduplicated) bipartite adjacency of a contracted multigraph.
struct BipartiteSupport {
    std::vector<char> is_s;
    std::vector<std::vector<int>> nbr;  // ascending neighbor ids
};

BipartiteSupport support_of(const Multigraph& b, const std::vector<int>& s_side) {
    BipartiteSupport sup;
    sup.is_s.assign(static_cast<std::size_t>(b.n), 0);
    for (int v : s_side) {
        if (v < 0 || v >= b.n)
            throw PreconditionError("p3_packing_covering: s vertex out of range");
        if (sup.is_s[static_cast<std::size_t>(v)])
            throw PreconditionError("p3_packing_covering: duplicate s vertex");
        sup.is_s[static_cast<std::size_t>(v)] = 1;
    }
    sup.nbr.assign(static_cast<std::size_t>(b.n), {});
    for (auto [x, y, m] : b.edges) {
        (void)m;
        if (sup.is_s[static_cast<std::size_t>(x)] == sup.is_s[static_cast<std::size_t>(y)])
            throw PreconditionError("p3_packing_covering: edge inside one side");
        sup.nbr[static_cast<std::size_t>(x)].push_back(y);
        sup.nbr[static_cast<std::size_t>(y)].push_back(x);
    }
    for (auto& v : sup.nbr) std::sort(v.begin(), v.end());
    return sup;
}

}  // namespace

PathPacking p3_packing_covering(const Multigraph& b, const std::vector<int>& s_side,
                                const std::vector<int>& u) {
    BipartiteSupport sup = support_of(b, s_side);
    std::vector<char> in_u(static_cast<std::size_t>(b.n), 0);
    for (int v : u) {
        if (v < 0 || v >= b.n || sup.is_s[static_cast<std::size_t>(v)])
            throw PreconditionError("p3_packing_covering: u must lie in the non-s side");
        in_u[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<int> s_sorted = s_side;
    std::sort(s_sorted.begin(), s_sorted.end());

    // Degree-2-on-s subgraph via two augmenting passes per s (each pass is
    // a unit-capacity alternating search; two passes realize capacity 2).
    std::vector<int> partner(static_cast<std::size_t>(b.n), -1);       // w -> s
    std::vector<std::vector<int>> sel(static_cast<std::size_t>(b.n));  // s -> w's
    std::vector<char> vis(static_cast<std::size_t>(b.n), 0);
    std::vector<char> w_tried(static_cast<std::size_t>(b.n), 0);

    // Augment one unit out of s: free w, or displace a partner s' that can
    // re-route one of its picks.
    auto augment = [&](auto&& self, int s) -> bool {
        if (vis[static_cast<std::size_t>(s)]) return false;
        vis[static_cast<std::size_t>(s)] = 1;
        for (int w : sup.nbr[static_cast<std::size_t>(s)]) {
            if (w_tried[static_cast<std::size_t>(w)]) continue;
            bool mine = std::find(sel[static_cast<std::size_t>(s)].begin(),
                                  sel[static_cast<std::size_t>(s)].end(),
                                  w) != sel[static_cast<std::size_t>(s)].end();
            if (mine) continue;
            if (partner[static_cast<std::size_t>(w)] == -1) {
                w_tried[static_cast<std::size_t>(w)] = 1;
                partner[static_cast<std::size_t>(w)] = s;
                sel[static_cast<std::size_t>(s)].push_back(w);
                return true;
            }
        }
        for (int w : sup.nbr[static_cast<std::size_t>(s)]) {
            if (w_tried[static_cast<std::size_t>(w)]) continue;
            int other = partner[static_cast<std::size_t>(w)];
            if (other == s) continue;
            w_tried[static_cast<std::size_t>(w)] = 1;
            if (self(self, other)) {
                auto& o = sel[static_cast<std::size_t>(other)];
                o.erase(std::find(o.begin(), o.end(), w));
                partner[static_cast<std::size_t>(w)] = s;
                sel[static_cast<std::size_t>(s)].push_back(w);
                return true;
            }
        }
        return false;
    };

    for (int s : s_sorted) {
        for (int round = 0; round < 2; ++round) {
            std::fill(vis.begin(), vis.end(), 0);
            std::fill(w_tried.begin(), w_tried.end(), 0);
            if (!augment(augment, s))
                throw HallViolatedError(
                    "p3_packing_covering: no degree-2 subgraph saturates the s side");
        }
    }

    // Alternating exchanges: walk non-selected edges w->s and selected edges
    // s->w until a covered leaf outside u can hand its slot to an uncovered
    // u-vertex.
    std::vector<int> parent_s(static_cast<std::size_t>(b.n), -1);
    std::vector<int> parent_w(static_cast<std::size_t>(b.n), -1);
    for (int start : u) {
        if (partner[static_cast<std::size_t>(start)] != -1) continue;
        std::fill(parent_s.begin(), parent_s.end(), -1);
        std::fill(parent_w.begin(), parent_w.end(), -1);
        std::fill(vis.begin(), vis.end(), 0);
        vis[static_cast<std::size_t>(start)] = 1;
        std::vector<int> queue{start};
        int target = -1;
        for (std::size_t head = 0; head < queue.size() && target == -1; ++head) {
            int w = queue[head];
            for (int s : sup.nbr[static_cast<std::size_t>(w)]) {
                if (vis[static_cast<std::size_t>(s)] ||
                    partner[static_cast<std::size_t>(w)] == s)
                    continue;
                vis[static_cast<std::size_t>(s)] = 1;
                parent_s[static_cast<std::size_t>(s)] = w;
                for (int w2 : sel[static_cast<std::size_t>(s)]) {
                    if (vis[static_cast<std::size_t>(w2)]) continue;
                    vis[static_cast<std::size_t>(w2)] = 1;
                    parent_w[static_cast<std::size_t>(w2)] = s;
                    if (!in_u[static_cast<std::size_t>(w2)]) {
                        target = w2;
                        break;
                    }
                    queue.push_back(w2);
                }
                if (target != -1) break;
            }
        }
        if (target == -1)
            throw HallViolatedError(
                "p3_packing_covering: no exchange path absorbs an uncovered u-vertex");
        std::vector<std::array<int, 3>> flips;  // {s, w out, w in}
        int wcur = target;
        for (;;) {
            int s = parent_w[static_cast<std::size_t>(wcur)];
            int wprev = parent_s[static_cast<std::size_t>(s)];
            flips.push_back({s, wcur, wprev});
            if (wprev == start) break;
            wcur = wprev;
        }
        for (auto& f : flips) {
            auto& o = sel[static_cast<std::size_t>(f[0])];
            o.erase(std::find(o.begin(), o.end(), f[1]));
            partner[static_cast<std::size_t>(f[1])] = -1;
        }
        for (auto& f : flips) {
            sel[static_cast<std::size_t>(f[0])].push_back(f[2]);
            partner[static_cast<std::size_t>(f[2])] = f[0];
        }
    }

    PathPacking out;
    for (int s : s_sorted) {
        auto picks = sel[static_cast<std::size_t>(s)];
        std::sort(picks.begin(), picks.end());
        out.paths.push_back({picks[0], s, picks[1]});
    }
    return out;
}

LinearForest LinearForest::from_paths(const Graph& g, std::vector<std::vector<int>> paths) {
    LinearForest f;
    f.n = g.n;
    std::vector<char> used(static_cast<std::size_t>(g.n), 0);
    for (auto& p : paths) {
        if (p.size() < 3 || p.size() > 5)
            throw PreconditionError("linear forest: paths must have 3..5 vertices");
        for (std::size_t i = 0; i < p.size(); ++i) {
            int v = p[i];
            if (v < 0 || v >= g.n)
                throw PreconditionError("linear forest: vertex out of range");
            if (used[static_cast<std::size_t>(v)])
                throw PreconditionError("linear forest: paths overlap at vertex " + g.label(v));
            used[static_cast<std::size_t>(v)] = 1;
            if (i > 0 && !g.has_edge(p[i - 1], v))
                throw PreconditionError("linear forest: consecutive path vertices not adjacent");
        }
    }
    f.paths = std::move(paths);
    for (int v = 0; v < g.n; ++v)
        if (!used[static_cast<std::size_t>(v)]) f.uncovered.push_back(v);
    return f;
}

bool LinearForest::covers(int v) const {
    return !std::binary_search(uncovered.begin(), uncovered.end(), v);
}

std::vector<int> forest_degree(const LinearForest& f) {
    std::vector<int> deg(static_cast<std::size_t>(f.n), 0);
    for (auto& p : f.paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            ++deg[static_cast<std::size_t>(p[i])];
            ++deg[static_cast<std::size_t>(p[i + 1])];
        }
    return deg;
}

std::vector<int> forest_edge_ids(const Graph& g, const LinearForest& f) {
    std::vector<int> ids;
    for (auto& p : f.paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            int e = g.edge_id(p[i], p[i + 1]);
            if (e < 0) throw PreconditionError("forest_edge_ids: path edge missing from host");
            ids.push_back(e);
        }
    std::sort(ids.begin(), ids.end());
    return ids;
}

namespace {

// Backtracking spanning-partition search. Paths through the lowest
// uncovered vertex are enumerated as two arms joined at the pivot; each
// undirected path shows up twice, so only the lexicographically smaller
// orientation is tried.
struct FactorSearch {
    const Graph& g;
    long long budget;
    bool complete = true;
    std::vector<char> used;
    int uncovered_count;
    std::vector<std::vector<int>> chosen;

    FactorSearch(const Graph& graph, long long node_budget)
        : g(graph),
          budget(node_budget),
          used(static_cast<std::size_t>(graph.n), 0),
          uncovered_count(graph.n) {}

    // The enumerator already holds the path's vertices in `used`; placing
    // only commits the path and recurses.
    bool place(const std::vector<int>& p) {
        uncovered_count -= static_cast<int>(p.size());
        chosen.push_back(p);
        if (extend()) return true;
        chosen.pop_back();
        uncovered_count += static_cast<int>(p.size());
        return false;
    }

    bool extend() {
        if (uncovered_count == 0) return true;
        if (uncovered_count < 3) return false;
        if (budget == 0) {
            complete = false;
            return false;
        }
        if (budget > 0) --budget;
        int pivot = 0;
        while (used[static_cast<std::size_t>(pivot)]) ++pivot;
        used[static_cast<std::size_t>(pivot)] = 1;

        std::vector<int> left;
        bool done = false;
        auto for_right = [&](auto&& self, std::vector<int>& right) -> void {
            int total = static_cast<int>(left.size() + right.size()) + 1;
            if (total >= 3) {
                std::vector<int> p(left.rbegin(), left.rend());
                p.push_back(pivot);
                p.insert(p.end(), right.begin(), right.end());
                std::vector<int> rev(p.rbegin(), p.rend());
                if (p <= rev && place(p)) {
                    done = true;
                    return;
                }
                if (!complete) return;
            }
            if (total >= 5) return;
            int tip = right.empty() ? pivot : right.back();
            for (auto [w, e] : g.adj[static_cast<std::size_t>(tip)]) {
                (void)e;
                if (used[static_cast<std::size_t>(w)]) continue;
                used[static_cast<std::size_t>(w)] = 1;
                right.push_back(w);
                self(self, right);
                right.pop_back();
                used[static_cast<std::size_t>(w)] = 0;
                if (done || !complete) return;
            }
        };
        auto for_left = [&](auto&& self) -> void {
            {
                std::vector<int> right;
                for_right(for_right, right);
                if (done || !complete) return;
            }
            if (left.size() >= 4) return;
            int tip = left.empty() ? pivot : left.back();
            for (auto [w, e] : g.adj[static_cast<std::size_t>(tip)]) {
                (void)e;
                if (used[static_cast<std::size_t>(w)]) continue;
                used[static_cast<std::size_t>(w)] = 1;
                left.push_back(w);
                self(self);
                left.pop_back();
                used[static_cast<std::size_t>(w)] = 0;
                if (done || !complete) return;
            }
        };
        for_left(for_left);
        used[static_cast<std::size_t>(pivot)] = 0;
        return done;
    }
};

}  // namespace

FactorSearchResult find_path_factor(const Graph& g, long long node_budget) {
    FactorSearchResult res;
    if (g.n == 0) {
        res.factor = std::vector<std::vector<int>>{};
        return res;
    }
    FactorSearch search(g, node_budget);
    if (search.extend())
        res.factor = search.chosen;
    else
        res.factor = std::nullopt;
    res.complete = search.complete;
    return res;
}

namespace {

// Grow paths at degree-1 ends onto uncovered neighbors until none applies;
// a six-vertex overflow splits into two P3s. Guarantees that every covered
// neighbor of an uncovered vertex ends with forest-degree 2.
void extend_fixpoint(const Graph& gc, std::vector<std::vector<int>>& paths) {
    for (;;) {
        std::vector<int> deg(static_cast<std::size_t>(gc.n), 0);
        std::vector<int> path_of(static_cast<std::size_t>(gc.n), -1);
        for (std::size_t pi = 0; pi < paths.size(); ++pi)
            for (std::size_t i = 0; i < paths[pi].size(); ++i) {
                int v = paths[pi][i];
                path_of[static_cast<std::size_t>(v)] = static_cast<int>(pi);
                if (i > 0) {
                    ++deg[static_cast<std::size_t>(v)];
                    ++deg[static_cast<std::size_t>(paths[pi][i - 1])];
                }
            }
        bool changed = false;
        for (int v = 0; v < gc.n && !changed; ++v) {
            if (path_of[static_cast<std::size_t>(v)] != -1) continue;
            for (auto [w, e] : gc.adj[static_cast<std::size_t>(v)]) {
                (void)e;
                if (path_of[static_cast<std::size_t>(w)] == -1 ||
                    deg[static_cast<std::size_t>(w)] != 1)
                    continue;
                auto& p = paths[static_cast<std::size_t>(path_of[static_cast<std::size_t>(w)])];
                if (p.front() == w) std::reverse(p.begin(), p.end());
                p.push_back(v);
                if (p.size() == 6) {
                    paths.push_back({p[3], p[4], p[5]});
                    p.resize(3);
                }
                changed = true;
                break;
            }
        }
        if (!changed) return;
    }
}

// One randomized chop of a connected component: random-order DFS, postorder
// combination of child chains into 3..5-vertex paths, merge and absorb the
// stranded leftovers, then the extension fixpoint.
std::vector<std::vector<int>> chop_attempt(const Graph& gc, Rng& rng) {
    int n = gc.n;
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> nb(static_cast<std::size_t>(n));
    std::vector<std::size_t> ptr(static_cast<std::size_t>(n), 0);
    std::vector<int> post;
    post.reserve(static_cast<std::size_t>(n));

    auto shuffled_neighbors = [&](int v) {
        std::vector<int> out;
        out.reserve(gc.adj[static_cast<std::size_t>(v)].size());
        for (auto [w, e] : gc.adj[static_cast<std::size_t>(v)]) {
            (void)e;
            out.push_back(w);
        }
        rng.shuffle(out);
        return out;
    };

    int root = rng.uniform(n);
    seen[static_cast<std::size_t>(root)] = 1;
    nb[static_cast<std::size_t>(root)] = shuffled_neighbors(root);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        if (ptr[static_cast<std::size_t>(v)] == nb[static_cast<std::size_t>(v)].size()) {
            post.push_back(v);
            stack.pop_back();
            continue;
        }
        int w = nb[static_cast<std::size_t>(v)][ptr[static_cast<std::size_t>(v)]++];
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = v;
        kids[static_cast<std::size_t>(v)].push_back(w);
        nb[static_cast<std::size_t>(w)] = shuffled_neighbors(w);
        stack.push_back(w);
    }

    std::vector<std::vector<int>> dangle(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> stranded;
    for (int v : post) {
        std::vector<std::vector<int>*> avail;
        for (int c : kids[static_cast<std::size_t>(v)])
            if (!dangle[static_cast<std::size_t>(c)].empty())
                avail.push_back(&dangle[static_cast<std::size_t>(c)]);
        if (avail.size() >= 2) {
            std::vector<int> p = *avail[0];
            p.push_back(v);
            p.insert(p.end(), avail[1]->rbegin(), avail[1]->rend());
            out.push_back(std::move(p));
            for (std::size_t i = 2; i < avail.size(); ++i)
                stranded.push_back(*avail[i]);
        } else if (avail.size() == 1) {
            std::vector<int> p = *avail[0];
            p.push_back(v);
            if (p.size() == 3)
                out.push_back(std::move(p));
            else
                dangle[static_cast<std::size_t>(v)] = std::move(p);
        } else {
            dangle[static_cast<std::size_t>(v)] = {v};
        }
    }
    if (!dangle[static_cast<std::size_t>(root)].empty())
        stranded.push_back(dangle[static_cast<std::size_t>(root)]);

    // Merge stranded fragments that connect by a real edge; emit when the
    // union reaches three vertices, keep growing two-vertex unions.
    auto ends_of = [](const std::vector<int>& f) {
        return std::array<int, 2>{f.front(), f.back()};
    };
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < stranded.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < stranded.size() && !merged; ++j) {
                if (stranded[i].size() + stranded[j].size() > 5) continue;
                for (int ea : ends_of(stranded[i])) {
                    for (int eb : ends_of(stranded[j])) {
                        if (!gc.has_edge(ea, eb)) continue;
                        std::vector<int> a = stranded[i], b = stranded[j];
                        if (a.back() != ea) std::reverse(a.begin(), a.end());
                        if (b.front() != eb) std::reverse(b.begin(), b.end());
                        a.insert(a.end(), b.begin(), b.end());
                        stranded.erase(stranded.begin() + static_cast<long>(j));
                        stranded.erase(stranded.begin() + static_cast<long>(i));
                        if (a.size() >= 3)
                            out.push_back(std::move(a));
                        else
                            stranded.push_back(std::move(a));
                        merged = true;
                        break;
                    }
                    if (merged) break;
                }
            }
        }
    }

    // Absorb a stranded chain into an existing path through any edge from a
    // chain end to a path vertex, splitting when pieces stay within 3..5.
    auto try_absorb = [&](const std::vector<int>& frag) -> bool {
        int fs = static_cast<int>(frag.size());
        for (auto& p : out) {
            int len = static_cast<int>(p.size());
            for (int j = 0; j < len; ++j) {
                for (int orient = 0; orient < 2; ++orient) {
                    int endv = orient == 0 ? frag.back() : frag.front();
                    if (!gc.has_edge(endv, p[static_cast<std::size_t>(j)])) continue;
                    std::vector<int> f = frag;
                    if (orient == 1) std::reverse(f.begin(), f.end());
                    // f now ends with the vertex adjacent to p[j]
                    if (j == 0 || j == len - 1) {
                        std::vector<int> np = p;
                        if (j == 0) std::reverse(np.begin(), np.end());
                        np.insert(np.end(), f.rbegin(), f.rend());
                        int total = len + fs;
                        if (total <= 5) {
                            p = np;
                            return true;
                        }
                        // split 6 -> 3+3, 7 -> 3+4
                        p.assign(np.begin(), np.begin() + 3);
                        out.push_back(std::vector<int>(np.begin() + 3, np.end()));
                        return true;
                    }
                    // interior: cut right of j (left keeps j) or left (right keeps j)
                    int left_with = j + 1 + fs, right_rest = len - j - 1;
                    if (left_with >= 3 && left_with <= 5 && right_rest >= 3 && right_rest <= 5) {
                        std::vector<int> lp(p.begin(), p.begin() + j + 1);
                        lp.insert(lp.end(), f.rbegin(), f.rend());
                        std::vector<int> rp(p.begin() + j + 1, p.end());
                        p = lp;
                        out.push_back(std::move(rp));
                        return true;
                    }
                    int right_with = len - j + fs, left_rest = j;
                    if (right_with >= 3 && right_with <= 5 && left_rest >= 3 && left_rest <= 5) {
                        std::vector<int> lp(p.begin(), p.begin() + j);
                        std::vector<int> rp(f);
                        rp.insert(rp.end(), p.begin() + j, p.end());
                        p = lp;
                        out.push_back(std::move(rp));
                        return true;
                    }
                }
            }
        }
        return false;
    };
    bool absorbed = true;
    while (absorbed) {
        absorbed = false;
        for (std::size_t i = 0; i < stranded.size(); ++i) {
            if (try_absorb(stranded[i])) {
                stranded.erase(stranded.begin() + static_cast<long>(i));
                absorbed = true;
                break;
            }
        }
    }

    extend_fixpoint(gc, out);
    return out;
}

// The deficiency-set construction for a connected component with no
// spanning path partition: pack P3s over the contracted sun components,
// grow them into 3..5-vertex host paths through the suns, cover chosen suns
// with matched-core paths, and factor the remaining components.
std::vector<std::vector<int>> deficiency_forest(const Graph& gc, int exact_limit) {
    if (auto d = is_sun(gc)) {
        PathPacking pk = sun_packing(*d, SunPackMode::uncover_leaf);
        auto paths = pk.paths;
        extend_fixpoint(gc, paths);
        return paths;
    }
    DeficiencyCertificate cert = deficiency(gc, exact_limit);
    if (cert.s.empty())
        throw StageError("linear forest: empty deficiency set on an unfactorable component");

    std::vector<char> in_s(static_cast<std::size_t>(gc.n), 0);
    for (int v : cert.s) in_s[static_cast<std::size_t>(v)] = 1;
    std::vector<int> rest;
    for (int v = 0; v < gc.n; ++v)
        if (!in_s[static_cast<std::size_t>(v)]) rest.push_back(v);
    std::vector<int> rest_to_gc;
    Graph rg = induced_subgraph(gc, rest, &rest_to_gc);

    std::vector<std::vector<int>> sun_comps, nonsun_comps;
    std::vector<SunDecomposition> sun_dec;
    for (auto& comp : components(rg)) {
        std::vector<int> comp_gc;
        for (int v : comp) comp_gc.push_back(rest_to_gc[static_cast<std::size_t>(v)]);
        Graph cg = induced_subgraph(gc, comp_gc);
        if (auto d = is_sun(cg)) {
            sun_dec.push_back(std::move(*d));
            sun_comps.push_back(std::move(comp_gc));
        } else {
            nonsun_comps.push_back(std::move(comp_gc));
        }
    }

    Contraction con = contract_components(gc, cert.s, sun_comps);
    int threshold = (gc.max_degree() + 1) / 2;  // = ceil(max_degree / 2)
    std::vector<int> u_ids;
    for (std::size_t i = 0; i < sun_comps.size(); ++i)
        if (con.b.mult_degree(con.comp_vertex[i]) >= threshold)
            u_ids.push_back(con.comp_vertex[i]);
    std::vector<int> s_ids(con.s_vertices.size());
    std::iota(s_ids.begin(), s_ids.end(), 0);
    PathPacking p3s = p3_packing_covering(con.b, s_ids, u_ids);

    std::vector<std::vector<int>> paths;
    std::vector<char> sun_used(sun_comps.size(), 0);

    // Crossing a P3 edge into a sun: enter at the lowest-id neighbor, take
    // two sun vertices as the arm, and cover the rest of a big sun with
    // core-matching paths that skip exactly the arm.
    auto make_arm = [&](int s_gc, std::size_t sun_idx) -> std::vector<int> {
        sun_used[sun_idx] = 1;
        const std::vector<int>& comp = sun_comps[sun_idx];
        const SunDecomposition& d = sun_dec[sun_idx];
        int x = -1;
        for (auto [nbv, e] : gc.adj[static_cast<std::size_t>(s_gc)]) {
            (void)e;
            if (std::binary_search(comp.begin(), comp.end(), nbv)) {
                x = nbv;
                break;
            }
        }
        if (x == -1) throw StageError("linear forest: packed sun not adjacent to its center");
        if (d.kind == SunKind::k1) return {x};
        if (d.kind == SunKind::k2) {
            int other = comp[0] == x ? comp[1] : comp[0];
            return {x, other};
        }
        int lx = static_cast<int>(std::lower_bound(comp.begin(), comp.end(), x) - comp.begin());
        int core_v, second;
        if (std::binary_search(d.core.begin(), d.core.end(), lx)) {
            core_v = lx;
            second = d.pendant_of(lx);
        } else {
            core_v = d.host.adj[static_cast<std::size_t>(lx)][0].first;  // pendant's owner
            second = core_v;
        }
        PathPacking rest_pack = sun_packing(d, SunPackMode::uncover_core_vertex, core_v);
        for (auto& lp : rest_pack.paths) {
            std::vector<int> hp;
            for (int v : lp) hp.push_back(comp[static_cast<std::size_t>(v)]);
            paths.push_back(std::move(hp));
        }
        return {x, comp[static_cast<std::size_t>(second)]};
    };

    for (auto& p3 : p3s.paths) {
        int s_gc = con.s_vertices[static_cast<std::size_t>(p3[1])];
        std::size_t left_idx = static_cast<std::size_t>(p3[0] - static_cast<int>(con.s_vertices.size()));
        std::size_t right_idx = static_cast<std::size_t>(p3[2] - static_cast<int>(con.s_vertices.size()));
        std::vector<int> left = make_arm(s_gc, left_idx);
        std::vector<int> right = make_arm(s_gc, right_idx);
        std::vector<int> full(left.rbegin(), left.rend());
        full.push_back(s_gc);
        full.insert(full.end(), right.begin(), right.end());
        paths.push_back(std::move(full));
    }

    for (std::size_t i = 0; i < sun_comps.size(); ++i) {
        if (sun_used[i] || sun_dec[i].kind != SunKind::big) continue;
        PathPacking pk = sun_packing(sun_dec[i], SunPackMode::uncover_leaf);
        for (auto& lp : pk.paths) {
            std::vector<int> hp;
            for (int v : lp) hp.push_back(sun_comps[i][static_cast<std::size_t>(v)]);
            paths.push_back(std::move(hp));
        }
    }

    for (auto& comp : nonsun_comps) {
        std::vector<int> to_gc;
        Graph cg = induced_subgraph(gc, comp, &to_gc);
        FactorSearchResult fr = find_path_factor(cg);
        if (!fr.factor)
            throw StageError("linear forest: an unfactorable non-sun component survived the deficiency set");
        for (auto& lp : *fr.factor) {
            std::vector<int> hp;
            for (int v : lp) hp.push_back(to_gc[static_cast<std::size_t>(v)]);
            paths.push_back(std::move(hp));
        }
    }

    extend_fixpoint(gc, paths);
    return paths;
}

std::vector<std::vector<int>> component_forest(const Graph& gc, std::uint64_t seed,
                                               int exact_limit, int restarts) {
    if (gc.n <= 2) return {};
    if (gc.n <= exact_limit) {
        FactorSearchResult r = find_path_factor(gc);
        if (r.factor) return *r.factor;
        auto paths = deficiency_forest(gc, exact_limit);
        LinearForest lf = LinearForest::from_paths(gc, paths);
        VerificationReport rep = verify_forest(gc, lf);
        if (!rep.passed())
            throw StageError("linear forest: construction broke property " +
                             rep.violations.front().check);
        return paths;
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < restarts; ++attempt) {
        auto paths = chop_attempt(gc, rng);
        LinearForest lf = LinearForest::from_paths(gc, paths);
        if (verify_forest(gc, lf).passed()) return paths;
    }
    FactorSearchResult r = find_path_factor(gc, 2'000'000);
    if (r.factor) return *r.factor;
    throw ForestFailedError("linear forest: all strategies failed on a component with " +
                            std::to_string(gc.n) + " vertices");
}

}  // namespace

LinearForest find_linear_forest(const Graph& g, std::uint64_t seed, int exact_limit,
                                int restarts) {
    if (exact_limit < 0 || restarts <= 0)
        throw PreconditionError("find_linear_forest: budgets must be positive");
    std::vector<std::vector<int>> host_paths;
    auto comps = components(g);
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        std::vector<int> to_host;
        Graph gc = induced_subgraph(g, comps[ci], &to_host);
        auto local = component_forest(gc, Rng::derive_seed(seed, ci), exact_limit, restarts);
        for (auto& lp : local) {
            std::vector<int> hp;
            hp.reserve(lp.size());
            for (int v : lp) hp.push_back(to_host[static_cast<std::size_t>(v)]);
            host_paths.push_back(std::move(hp));
        }
    }
    LinearForest f = LinearForest::from_paths(g, std::move(host_paths));
    VerificationReport rep = verify_forest(g, f);
    if (!rep.passed())
        throw ForestFailedError("linear forest: assembled forest failed " +
                                rep.violations.front().check);
    return f;
}

}  // namespace vdec
