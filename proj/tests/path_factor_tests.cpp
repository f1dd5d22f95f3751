#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "vdec/generate.hpp"
#include "vdec/graph.hpp"
#include "vdec/matching.hpp"
#include "vdec/path_factor.hpp"
#include "vdec/rng.hpp"
#include "vdec/verify.hpp"

using namespace vdec;

namespace {

// Sun test straight from the definition, by subset enumeration: some core
// set R induces a factor-critical graph, every vertex outside R has degree 1
// with its neighbor in R, and every R vertex has exactly one outside
// neighbor. Independent of the pendant-stripping recognizer.
bool definitional_sun(const Graph& g) {
    if (components(g).size() != 1) return false;
    if (g.n == 1) return true;
    if (g.n == 2) return g.edge_count() == 1;
    if (g.n % 2 != 0 || g.n > 20) return false;
    for (int mask = 1; mask < (1 << g.n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != g.n / 2) continue;
        bool ok = true;
        for (int v = 0; v < g.n && ok; ++v) {
            bool in_core = mask & (1 << v);
            int outside = 0;
            for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
                (void)e;
                if (!(mask & (1 << w))) ++outside;
            }
            if (in_core) {
                if (outside != 1) ok = false;
            } else {
                if (g.degree(v) != 1 || outside != 0) ok = false;
            }
        }
        if (!ok) continue;
        std::vector<int> core;
        for (int v = 0; v < g.n; ++v)
            if (mask & (1 << v)) core.push_back(v);
        if (is_factor_critical(induced_subgraph(g, core))) return true;
    }
    return false;
}

// Exhaustive deficiency with no pruning at all.
long long brute_deficiency(const Graph& g) {
    long long best = sun_count(g);
    for (int mask = 1; mask < (1 << g.n); ++mask) {
        std::vector<int> keep;
        for (int v = 0; v < g.n; ++v)
            if (!(mask & (1 << v))) keep.push_back(v);
        Graph rest = induced_subgraph(g, keep);
        long long val = sun_count(rest) - 2LL * __builtin_popcount(static_cast<unsigned>(mask));
        if (val > best) best = val;
    }
    return best;
}

Graph triangle_sun() {
    // triangle 0 1 2 with pendants 3 4 5
    return Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 4}, {2, 5}});
}

void check_packing_shape(const Graph& g, const PathPacking& p,
                         const std::vector<int>& allowed) {
    auto rep = verify_packing(g, p, allowed);
    CHECK(rep.passed());
}

}  // namespace

TEST_CASE("[PathFactor] is_sun on the worked examples") {
    auto k1 = is_sun(gen_path(1));
    REQUIRE(k1.has_value());
    CHECK(k1->kind == SunKind::k1);

    auto k2 = is_sun(gen_path(2));
    REQUIRE(k2.has_value());
    CHECK(k2->kind == SunKind::k2);

    auto big = is_sun(triangle_sun());
    REQUIRE(big.has_value());
    CHECK(big->kind == SunKind::big);
    CHECK(big->core == std::vector<int>{0, 1, 2});
    CHECK(big->pendant_of(0) == 3);
    CHECK(big->pendant_of(1) == 4);
    CHECK(big->pendant_of(2) == 5);

    CHECK_FALSE(is_sun(gen_cycle(4)).has_value());
    CHECK_FALSE(is_sun(gen_path(5)).has_value());
    CHECK_FALSE(is_sun(gen_path(4)).has_value());
    CHECK_FALSE(is_sun(gen_cycle(5)).has_value());  // odd cycle, no pendants
}

TEST_CASE("[PathFactor] is_sun requires a connected input") {
    Graph two = Graph::from_edges(2, {});
    CHECK_THROWS_AS(is_sun(two), PreconditionError);
}

TEST_CASE("[PathFactor] is_sun agrees with the definitional subset check") {
    Rng rng(777);
    int suns_seen = 0;
    for (int i = 0; i < 150; ++i) {
        int n = 1 + rng.uniform(10);
        Graph g = gen_gnp(n, 0.15 + 0.09 * rng.uniform(8), rng.next());
        if (components(g).size() != 1) continue;
        bool ours = is_sun(g).has_value();
        CHECK(ours == definitional_sun(g));
        if (ours) ++suns_seen;
    }
    // C5 cores with pendants, to hit big suns deliberately
    Graph c5sun = Graph::from_edges(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
                                         {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}});
    CHECK(is_sun(c5sun).has_value());
    CHECK(definitional_sun(c5sun));
    CHECK(suns_seen + 1 > 0);
}

TEST_CASE("[PathFactor] sun_count on the worked examples") {
    CHECK(sun_count(Graph::from_edges(3, {})) == 3);
    Graph mix = Graph::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {4, 5}});
    CHECK(sun_count(mix) == 1);  // C4 is not a sun, K2 is
    CHECK(sun_count(gen_path(5)) == 0);
    CHECK(sun_count(triangle_sun()) == 1);
}

TEST_CASE("[PathFactor] deficiency on the worked examples") {
    DeficiencyCertificate star = deficiency(gen_star(4));
    CHECK(star.value == 1);
    CHECK(star.s == std::vector<int>{0});

    DeficiencyCertificate c5 = deficiency(gen_cycle(5));
    CHECK(c5.value == 0);
    CHECK(c5.s.empty());

    DeficiencyCertificate k2 = deficiency(gen_path(2));
    CHECK(k2.value == 1);
    CHECK(k2.s.empty());
}

TEST_CASE("[PathFactor] deficiency matches the unpruned exhaustive value") {
    Rng rng(31337);
    for (int i = 0; i < 60; ++i) {
        int n = 1 + rng.uniform(9);
        Graph g = gen_gnp(n, 0.1 + 0.09 * rng.uniform(9), rng.next());
        DeficiencyCertificate cert = deficiency(g);
        CHECK(cert.value == brute_deficiency(g));
        // the certificate itself re-evaluates to its claimed value
        std::vector<int> keep;
        for (int v = 0; v < g.n; ++v)
            if (!std::binary_search(cert.s.begin(), cert.s.end(), v)) keep.push_back(v);
        CHECK(cert.value ==
              sun_count(induced_subgraph(g, keep)) - 2LL * static_cast<long long>(cert.s.size()));
    }
}

TEST_CASE("[PathFactor] deficiency refuses oversized inputs") {
    CHECK_THROWS_AS(deficiency(gen_gnp(25, 0.3, 1), 20), SizeExceededError);
}

TEST_CASE("[PathFactor] kaneko_condition on the worked examples") {
    CHECK(kaneko_condition(gen_path(3)));
    CHECK_FALSE(kaneko_condition(gen_star(4)));
    CHECK_FALSE(kaneko_condition(gen_path(2)));
    CHECK(kaneko_condition(gen_cycle(5)));
}

TEST_CASE("[PathFactor] kaneko_condition is exactly factorability") {
    Rng rng(11);
    for (int i = 0; i < 120; ++i) {
        int n = 1 + rng.uniform(11);
        Graph g = gen_gnp(n, 0.1 + 0.08 * rng.uniform(10), rng.next());
        FactorSearchResult r = find_path_factor(g);
        REQUIRE(r.complete);
        CHECK(kaneko_condition(g) == r.factor.has_value());
    }
}

TEST_CASE("[PathFactor] sun_packing uncovering a core vertex") {
    auto d = is_sun(triangle_sun());
    REQUIRE(d.has_value());
    PathPacking p = sun_packing(*d, SunPackMode::uncover_core_vertex, 0);
    REQUIRE(p.paths.size() == 1);
    CHECK(p.paths[0] == std::vector<int>{4, 1, 2, 5});
    check_packing_shape(d->host, p, {4});
}

TEST_CASE("[PathFactor] sun_packing uncovering one pendant") {
    auto d = is_sun(triangle_sun());
    REQUIRE(d.has_value());
    PathPacking p = sun_packing(*d, SunPackMode::uncover_leaf, 0);
    REQUIRE(p.paths.size() == 1);
    CHECK(p.paths[0] == std::vector<int>{3, 0, 1, 2, 5});
    check_packing_shape(d->host, p, {4, 5});
    // the uncovered pendant's neighbor sits inside the path
    std::set<int> covered(p.paths[0].begin(), p.paths[0].end());
    CHECK(covered.count(4) == 0);
    CHECK(covered.size() == 5);
}

TEST_CASE("[PathFactor] sun_packing covers all but one vertex in leaf mode") {
    // C5 core with five pendants
    Graph g = Graph::from_edges(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
                                     {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}});
    auto d = is_sun(g);
    REQUIRE(d.has_value());
    for (int w : d->core) {
        PathPacking leaf = sun_packing(*d, SunPackMode::uncover_leaf, w);
        check_packing_shape(g, leaf, {4, 5});
        std::set<int> covered;
        for (auto& path : leaf.paths) covered.insert(path.begin(), path.end());
        CHECK(covered.size() == 9);

        PathPacking core = sun_packing(*d, SunPackMode::uncover_core_vertex, w);
        check_packing_shape(g, core, {4});
        std::set<int> covered2;
        for (auto& path : core.paths) covered2.insert(path.begin(), path.end());
        CHECK(covered2.size() == 8);
        CHECK(covered2.count(w) == 0);
        CHECK(covered2.count(d->pendant_of(w)) == 0);
    }
}

TEST_CASE("[PathFactor] p3_packing_covering forced and empty cases") {
    // single center s with two leaves
    Multigraph b = Multigraph::from_edges(3, {{0, 1, 1}, {0, 2, 1}});
    PathPacking p = p3_packing_covering(b, {0}, {});
    REQUIRE(p.paths.size() == 1);
    CHECK(p.paths[0] == std::vector<int>{1, 0, 2});

    Multigraph empty = Multigraph::from_edges(3, {});
    PathPacking none = p3_packing_covering(empty, {}, {});
    CHECK(none.paths.empty());
}

TEST_CASE("[PathFactor] p3_packing_covering absorbs a required leaf") {
    // s = 0 with leaves 1 2 3; vertex 3 must be covered
    Multigraph b = Multigraph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    PathPacking p = p3_packing_covering(b, {0}, {3});
    REQUIRE(p.paths.size() == 1);
    CHECK(p.paths[0].size() == 3);
    CHECK(p.paths[0][1] == 0);
    CHECK((p.paths[0][0] == 3 || p.paths[0][2] == 3));
}

TEST_CASE("[PathFactor] p3_packing_covering detects missing capacity") {
    // two centers share a single leaf; Hall fails
    Multigraph b = Multigraph::from_edges(3, {{0, 2, 2}, {1, 2, 2}});
    CHECK_THROWS_AS(p3_packing_covering(b, {0, 1}, {}), HallViolatedError);
}

TEST_CASE("[PathFactor] p3_packing_covering postconditions on random instances") {
    Rng rng(440);
    int built = 0;
    for (int i = 0; i < 60; ++i) {
        int s_count = 1 + rng.uniform(4);
        int w_count = 2 * s_count + rng.uniform(4);
        std::vector<std::tuple<int, int, int>> edges;
        for (int s = 0; s < s_count; ++s)
            for (int w = 0; w < w_count; ++w)
                if (rng.chance(0.55))
                    edges.emplace_back(s, s_count + w, 1 + rng.uniform(2));
        Multigraph b = Multigraph::from_edges(s_count + w_count, std::move(edges));
        std::vector<int> s_side(static_cast<std::size_t>(s_count));
        for (int s = 0; s < s_count; ++s) s_side[static_cast<std::size_t>(s)] = s;
        int delta = 0;
        for (int v = 0; v < b.n; ++v) delta = std::max(delta, b.mult_degree(v));
        std::vector<int> u;
        for (int w = s_count; w < b.n; ++w)
            if (b.mult_degree(w) >= (delta + 1) / 2) u.push_back(w);
        PathPacking p;
        try {
            p = p3_packing_covering(b, s_side, u);
        } catch (const HallViolatedError&) {
            continue;  // sparse random instance without the subgraph; skip
        }
        ++built;
        CHECK(p.paths.size() == static_cast<std::size_t>(s_count));
        std::vector<int> deg(static_cast<std::size_t>(b.n), 0);
        std::set<int> covered;
        for (auto& path : p.paths) {
            REQUIRE(path.size() == 3);
            // center belongs to s, leaves to the other side, each edge real
            CHECK(path[1] < s_count);
            for (int leaf : {path[0], path[2]}) {
                CHECK(leaf >= s_count);
                bool adjacent = false;
                for (auto [x, m] : b.adj[static_cast<std::size_t>(path[1])]) {
                    (void)m;
                    if (x == leaf) adjacent = true;
                }
                CHECK(adjacent);
            }
            for (int v : path) {
                ++deg[static_cast<std::size_t>(v)];
                covered.insert(v);
            }
        }
        for (auto& path : p.paths) {
            CHECK(deg[static_cast<std::size_t>(path[0])] == 1);
            CHECK(deg[static_cast<std::size_t>(path[2])] == 1);
        }
        for (int v : u) CHECK(covered.count(v) == 1);
    }
    CHECK(built > 10);
}

TEST_CASE("[PathFactor] from_paths validates and fills the uncovered list") {
    Graph g = gen_path(5);
    LinearForest f = LinearForest::from_paths(g, {{0, 1, 2}});
    CHECK(f.uncovered == std::vector<int>{3, 4});
    CHECK(f.covers(1));
    CHECK_FALSE(f.covers(3));

    CHECK_THROWS_AS(LinearForest::from_paths(g, {{0, 1}}), PreconditionError);
    CHECK_THROWS_AS(LinearForest::from_paths(g, {{0, 1, 3}}), PreconditionError);
    CHECK_THROWS_AS(LinearForest::from_paths(g, {{0, 1, 2}, {2, 3, 4}}), PreconditionError);
}

TEST_CASE("[PathFactor] forest_degree and forest_edge_ids") {
    Graph g = gen_path(5);
    LinearForest f = LinearForest::from_paths(g, {{0, 1, 2}});
    auto deg = forest_degree(f);
    CHECK(deg == std::vector<int>{1, 2, 1, 0, 0});
    auto ids = forest_edge_ids(g, f);
    CHECK(ids == std::vector<int>{0, 1});
}

TEST_CASE("[PathFactor] find_path_factor settles the worked examples") {
    FactorSearchResult c5 = find_path_factor(gen_cycle(5));
    REQUIRE(c5.complete);
    REQUIRE(c5.factor.has_value());
    CHECK(c5.factor->size() == 1);

    FactorSearchResult star = find_path_factor(gen_star(4));
    CHECK(star.complete);
    CHECK_FALSE(star.factor.has_value());

    FactorSearchResult empty = find_path_factor(Graph::from_edges(0, {}));
    CHECK(empty.complete);
    CHECK(empty.factor.has_value());
}

TEST_CASE("[PathFactor] find_path_factor reports an exhausted budget") {
    // dense graph, one-node budget: no proof either way
    FactorSearchResult r = find_path_factor(gen_gnp(18, 0.6, 4), 1);
    CHECK_FALSE(r.complete);
    CHECK_FALSE(r.factor.has_value());
}

TEST_CASE("[PathFactor] find_linear_forest covers the worked examples") {
    LinearForest c5 = find_linear_forest(gen_cycle(5));
    CHECK(c5.paths.size() == 1);
    CHECK(c5.uncovered.empty());
    CHECK(verify_forest(gen_cycle(5), c5).passed());

    Graph star = gen_star(4);
    LinearForest f = find_linear_forest(star);
    CHECK(verify_forest(star, f).passed());
    CHECK(f.paths.size() == 1);
    CHECK(f.uncovered.size() == 1);

    Graph k2 = gen_path(2);
    LinearForest e = find_linear_forest(k2);
    CHECK(e.paths.empty());
    CHECK(e.uncovered == std::vector<int>{0, 1});
    CHECK(verify_forest(k2, e).passed());
}

TEST_CASE("[PathFactor] find_linear_forest passes the property checker on a mixed corpus") {
    Rng rng(12345);
    for (int i = 0; i < 40; ++i) {
        Graph g;
        switch (rng.uniform(4)) {
            case 0: g = gen_gnp(4 + rng.uniform(20), 0.15 + 0.1 * rng.uniform(5), rng.next()); break;
            case 1: g = gen_tree(3 + rng.uniform(26), rng.next()); break;
            case 2: g = gen_star(3 + rng.uniform(20)); break;
            default: g = gen_cycle(3 + rng.uniform(17)); break;
        }
        LinearForest f = find_linear_forest(g, rng.next());
        CHECK(verify_forest(g, f).passed());
    }
}

TEST_CASE("[PathFactor] the heuristic route alone also satisfies the properties") {
    Rng rng(54321);
    for (int i = 0; i < 25; ++i) {
        Graph g = gen_tree(10 + rng.uniform(18), rng.next());
        // exact_limit 0 forces the chop-and-repair path even on small graphs
        LinearForest f = find_linear_forest(g, rng.next(), 0, 200);
        CHECK(verify_forest(g, f).passed());
    }
    Graph reg = gen_regular(64, 4, 9);
    LinearForest f = find_linear_forest(reg, 1, 0, 200);
    CHECK(verify_forest(reg, f).passed());
}
