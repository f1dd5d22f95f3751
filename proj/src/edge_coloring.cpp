#include "vdec/edge_coloring.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "vdec/rng.hpp"

namespace vdec {

int ColorSet::size() const {
    int s = 0;
    for (std::uint64_t w : words) s += std::popcount(w);
    return s;
}

bool ColorSet::empty() const {
    for (std::uint64_t w : words)
        if (w) return false;
    return true;
}

std::vector<int> ColorSet::values() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::uint64_t w = words[i];
        while (w) {
            int bit = std::countr_zero(w);
            out.push_back(static_cast<int>(i) * 64 + bit + 1);
            w &= w - 1;
        }
    }
    return out;
}

bool ColorSet::operator==(const ColorSet& o) const {
    std::size_t common = std::min(words.size(), o.words.size());
    for (std::size_t i = 0; i < common; ++i)
        if (words[i] != o.words[i]) return false;
    for (std::size_t i = common; i < words.size(); ++i)
        if (words[i]) return false;
    for (std::size_t i = common; i < o.words.size(); ++i)
        if (o.words[i]) return false;
    return true;
}

std::size_t ColorSetHash::operator()(const ColorSet& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : s.words) {
        if (!w) continue;  // trailing zero words must not affect the hash
        h ^= w;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

bool EdgeColoring::total() const {
    for (int c : color)
        if (c == 0) return false;
    return true;
}

bool EdgeColoring::proper() const {
    for (int v = 0; v < host.n; ++v) {
        ColorSet seen(palette);
        for (auto [w, e] : host.adj[static_cast<std::size_t>(v)]) {
            (void)w;
            int c = color[static_cast<std::size_t>(e)];
            if (c == 0) continue;
            if (c < 1 || c > palette) return false;
            if (seen.contains(c)) return false;
            seen.insert(c);
        }
    }
    return true;
}

int EdgeColoring::colors_used() const {
    std::set<int> used;
    for (int c : color)
        if (c != 0) used.insert(c);
    return static_cast<int>(used.size());
}

ColorSet color_set(const EdgeColoring& c, int v) {
    if (v < 0 || v >= c.host.n) throw PreconditionError("color_set: vertex out of range");
    ColorSet s(c.palette);
    for (auto [w, e] : c.host.adj[static_cast<std::size_t>(v)]) {
        (void)w;
        int col = c.color[static_cast<std::size_t>(e)];
        if (col == 0)
            throw PreconditionError("color_set: uncolored edge at vertex " +
                                    c.host.label(v));
        s.insert(col);
    }
    return s;
}

ColorSetTable color_set_table(const EdgeColoring& c) {
    ColorSetTable table;
    for (int v = 0; v < c.host.n; ++v) ++table[color_set(c, v)];
    return table;
}

long long potential(const EdgeColoring& c) {
    long long p = 0;
    for (auto& [set, count] : color_set_table(c)) {
        (void)set;
        p += static_cast<long long>(count) * count;
    }
    return p;
}

namespace {

bool is_free(const EdgeColoring& c, int v, int col) {
    for (auto [w, e] : c.host.adj[static_cast<std::size_t>(v)]) {
        (void)w;
        if (c.color[static_cast<std::size_t>(e)] == col) return false;
    }
    return true;
}

int lowest_free(const EdgeColoring& c, int v) {
    ColorSet seen(c.palette);
    for (auto [w, e] : c.host.adj[static_cast<std::size_t>(v)]) {
        (void)w;
        int col = c.color[static_cast<std::size_t>(e)];
        if (col) seen.insert(col);
    }
    for (int col = 1; col <= c.palette; ++col)
        if (!seen.contains(col)) return col;
    throw StageError("vizing: no free color; palette too small");
}

// Swap colors c1/c2 along the maximal two-colored path starting at x (x is
// missing c1, so the path leaves x on a c2 edge when one exists).
void invert_two_color_path(EdgeColoring& col, int x, int c1, int c2) {
    int cur = x, want = c2, prev_edge = -1;
    for (;;) {
        int next_edge = -1, next_vertex = -1;
        for (auto [w, e] : col.host.adj[static_cast<std::size_t>(cur)]) {
            if (e != prev_edge && col.color[static_cast<std::size_t>(e)] == want) {
                next_edge = e;
                next_vertex = w;
                break;
            }
        }
        if (next_edge == -1) return;
        col.color[static_cast<std::size_t>(next_edge)] = (want == c2) ? c1 : c2;
        prev_edge = next_edge;
        cur = next_vertex;
        want = (want == c2) ? c1 : c2;
    }
}

void color_one_edge(EdgeColoring& col, int eid) {
    const Graph& g = col.host;
    int x = g.edges[static_cast<std::size_t>(eid)].first;
    int y = g.edges[static_cast<std::size_t>(eid)].second;

    // Maximal fan of x starting at y: each next edge's color is free at the
    // previous fan vertex.
    std::vector<int> fan{y};
    std::vector<int> fan_edge{eid};
    std::vector<bool> in_fan(static_cast<std::size_t>(g.n), false);
    in_fan[static_cast<std::size_t>(y)] = true;
    bool extended = true;
    while (extended) {
        extended = false;
        for (auto [w, e] : g.adj[static_cast<std::size_t>(x)]) {
            int c = col.color[static_cast<std::size_t>(e)];
            if (c == 0 || in_fan[static_cast<std::size_t>(w)]) continue;
            if (is_free(col, fan.back(), c)) {
                fan.push_back(w);
                fan_edge.push_back(e);
                in_fan[static_cast<std::size_t>(w)] = true;
                extended = true;
            }
        }
    }

    int c1 = lowest_free(col, x);
    int c2 = lowest_free(col, fan.back());
    if (c1 != c2) invert_two_color_path(col, x, c1, c2);

    // After the inversion some fan prefix ends at a vertex with c2 free.
    std::size_t w = 0;
    while (w < fan.size() && !is_free(col, fan[w], c2)) ++w;
    if (w == fan.size()) throw StageError("vizing: fan rotation target missing");
    for (std::size_t i = 0; i < w; ++i)
        col.color[static_cast<std::size_t>(fan_edge[i])] =
            col.color[static_cast<std::size_t>(fan_edge[i + 1])];
    col.color[static_cast<std::size_t>(fan_edge[w])] = c2;
}

}  // namespace

EdgeColoring vizing_color(const Graph& g) {
    EdgeColoring col;
    col.host = g;
    col.palette = g.max_degree() + 1;
    col.color.assign(g.edges.size(), 0);
    for (int e = 0; e < g.edge_count(); ++e) color_one_edge(col, e);
    if (!col.total() || !col.proper())
        throw StageError("vizing: produced coloring failed self-check");
    return col;
}

std::vector<KempeChain> kempe_chains(const EdgeColoring& c, int a, int b) {
    if (a == b || a < 1 || b < 1 || a > c.palette || b > c.palette)
        throw PreconditionError("kempe_chains: colors must be distinct palette members");
    const Graph& g = c.host;
    // chain_edge[v][0] = incident a edge, [1] = incident b edge (or -1).
    std::vector<std::array<int, 2>> chain_edge(static_cast<std::size_t>(g.n), {-1, -1});
    for (int e = 0; e < g.edge_count(); ++e) {
        int col = c.color[static_cast<std::size_t>(e)];
        int slot = col == a ? 0 : col == b ? 1 : -1;
        if (slot < 0) continue;
        auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        chain_edge[static_cast<std::size_t>(u)][static_cast<std::size_t>(slot)] = e;
        chain_edge[static_cast<std::size_t>(v)][static_cast<std::size_t>(slot)] = e;
    }
    std::vector<bool> used(g.edges.size(), false);
    std::vector<KempeChain> chains;

    auto walk = [&](int start, int first_edge) {
        KempeChain chain;
        int cur = start, e = first_edge;
        for (;;) {
            used[static_cast<std::size_t>(e)] = true;
            chain.edges.push_back(e);
            auto [u, v] = g.edges[static_cast<std::size_t>(e)];
            cur = (cur == u) ? v : u;
            int other = c.color[static_cast<std::size_t>(e)] == a ? 1 : 0;
            int next = chain_edge[static_cast<std::size_t>(cur)][static_cast<std::size_t>(other)];
            if (next == -1) {
                chain.cycle = false;
                chain.endpoints = {start, cur};
                return chain;
            }
            if (used[static_cast<std::size_t>(next)]) {
                chain.cycle = true;
                chain.endpoints = {start, start};
                return chain;
            }
            e = next;
        }
    };

    for (int v = 0; v < g.n; ++v) {
        auto [ea, eb] = chain_edge[static_cast<std::size_t>(v)];
        bool has_a = ea != -1, has_b = eb != -1;
        if (has_a == has_b) continue;  // interior or untouched
        int e = has_a ? ea : eb;
        if (!used[static_cast<std::size_t>(e)]) chains.push_back(walk(v, e));
    }
    for (int v = 0; v < g.n; ++v) {  // remaining edges lie on cycles
        for (int e : chain_edge[static_cast<std::size_t>(v)])
            if (e != -1 && !used[static_cast<std::size_t>(e)]) chains.push_back(walk(v, e));
    }
    return chains;
}

void swap_chain(EdgeColoring& c, const KempeChain& chain, int a, int b) {
    for (int e : chain.edges) {
        int& col = c.color[static_cast<std::size_t>(e)];
        if (col == a)
            col = b;
        else if (col == b)
            col = a;
        else
            throw PreconditionError("swap_chain: chain edge not colored a or b");
    }
}

namespace {

// Incremental state for the potential local search.
struct RefineState {
    EdgeColoring col;
    std::vector<ColorSet> sets;
    ColorSetTable table;
    long long pot = 0;
    int oversized = 0;  // classes with >= 3 vertices

    explicit RefineState(const EdgeColoring& c) : col(c) {
        sets.reserve(static_cast<std::size_t>(c.host.n));
        for (int v = 0; v < c.host.n; ++v) sets.push_back(color_set(c, v));
        for (auto& s : sets) bump(s, +1);
    }

    void bump(const ColorSet& s, int d) {
        int& cnt = table[s];
        pot -= static_cast<long long>(cnt) * cnt;
        if (cnt >= 3) --oversized;
        cnt += d;
        pot += static_cast<long long>(cnt) * cnt;
        if (cnt >= 3) ++oversized;
        if (cnt == 0) table.erase(s);
    }

    bool semi_vd() const { return oversized == 0; }

    // Swap a chain and maintain sets/potential at the path endpoints.
    void apply(const KempeChain& chain, int a, int b) {
        swap_chain(col, chain, a, b);
        if (chain.cycle) return;
        for (std::size_t i = 0; i < 2; ++i) {
            int v = chain.endpoints[i];
            if (i == 1 && chain.endpoints[1] == chain.endpoints[0]) break;
            ColorSet& s = sets[static_cast<std::size_t>(v)];
            bump(s, -1);
            if (s.contains(a)) {
                s.erase(a);
                s.insert(b);
            } else {
                s.erase(b);
                s.insert(a);
            }
            bump(s, +1);
        }
    }
};

}  // namespace

EdgeColoring semi_vd_refine(const EdgeColoring& start, std::uint64_t seed, int restarts) {
    if (!start.total() || !start.proper())
        throw PreconditionError("semi_vd_refine: input must be a proper total coloring");
    DegreeProfile prof = degree_profile(start.host);
    for (int d = 1; d <= prof.max_deg; ++d) {
        long long need = prof.counts[static_cast<std::size_t>(d)];
        if (need > 0 && !binomial_at_least(start.palette, d, need))
            throw PreconditionError("semi_vd_refine: degree class " + std::to_string(d) +
                                    " exceeds C(palette, d)");
    }

    RefineState st(start);
    Rng rng(seed);
    int k = start.palette;

    auto descend = [&]() {
        // First improvement: ordered color pairs lexicographically, chains
        // in discovery order; restart the scan after every accepted swap.
        for (;;) {
            bool improved = false;
            for (int a = 1; a <= k && !improved; ++a) {
                for (int b = 1; b <= k && !improved; ++b) {
                    if (a == b) continue;
                    for (const KempeChain& chain : kempe_chains(st.col, a, b)) {
                        if (chain.cycle) continue;
                        long long before = st.pot;
                        st.apply(chain, a, b);
                        if (st.pot < before) {
                            improved = true;
                            break;
                        }
                        st.apply(chain, a, b);  // undo
                    }
                }
            }
            if (!improved) return;
        }
    };

    descend();
    for (int round = 0; round < restarts && !st.semi_vd(); ++round) {
        // Shake: random chain swaps, tolerating a bounded potential increase.
        int shakes = 2 * std::max(1, st.col.host.edge_count());
        for (int i = 0; i < shakes; ++i) {
            int a = 1 + rng.uniform(k);
            int b = 1 + rng.uniform(k - 1);
            if (b >= a) ++b;
            auto chains = kempe_chains(st.col, a, b);
            if (chains.empty()) continue;
            const KempeChain& chain = chains[static_cast<std::size_t>(
                rng.uniform(static_cast<int>(chains.size())))];
            long long before = st.pot;
            st.apply(chain, a, b);
            if (st.pot > before + 4) st.apply(chain, a, b);
        }
        descend();
    }
    if (!st.semi_vd())
        throw SemiVdFailedError("semi_vd_refine: restart budget exhausted with a color set on 3+ vertices");
    return st.col;
}

}  // namespace vdec
