#include "vdec/graph.hpp"

#include <gmp.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace vdec {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
    Graph g;
    g.n = n;
    for (auto& [u, v] : edge_list) {
        if (u == v) throw PreconditionError("loop edge at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw PreconditionError("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    auto dup = std::adjacent_find(edge_list.begin(), edge_list.end());
    if (dup != edge_list.end())
        throw PreconditionError("duplicate edge " + std::to_string(dup->first) + "-" +
                                std::to_string(dup->second));
    g.edges = std::move(edge_list);
    g.adj.assign(static_cast<std::size_t>(n), {});
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        g.adj[static_cast<std::size_t>(u)].push_back({v, e});
        g.adj[static_cast<std::size_t>(v)].push_back({u, e});
    }
    for (auto& lst : g.adj) std::sort(lst.begin(), lst.end());
    g.labels.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) g.labels.push_back(std::to_string(v));
    return g;
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
    return d;
}

int Graph::min_degree() const {
    if (n == 0) return 0;
    int d = degree(0);
    for (int v = 1; v < n; ++v) d = std::min(d, degree(v));
    return d;
}

int Graph::edge_id(int u, int v) const {
    const auto& lst = adj[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(lst.begin(), lst.end(), std::pair<int, int>{v, -1});
    if (it != lst.end() && it->first == v) return it->second;
    return -1;
}

Multigraph Multigraph::from_edges(int n, std::vector<std::tuple<int, int, int>> edge_list) {
    Multigraph m;
    m.n = n;
    for (auto& [u, v, mult] : edge_list) {
        if (u == v) throw PreconditionError("loop edge in multigraph");
        if (mult <= 0) throw PreconditionError("nonpositive multiplicity");
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    m.edges = std::move(edge_list);
    m.adj.assign(static_cast<std::size_t>(n), {});
    for (auto& [u, v, mult] : m.edges) {
        m.adj[static_cast<std::size_t>(u)].push_back({v, mult});
        m.adj[static_cast<std::size_t>(v)].push_back({u, mult});
    }
    for (auto& lst : m.adj) std::sort(lst.begin(), lst.end());
    return m;
}

int Multigraph::mult_degree(int v) const {
    int d = 0;
    for (auto [w, mult] : adj[static_cast<std::size_t>(v)]) {
        (void)w;
        d += mult;
    }
    return d;
}

DegreeProfile degree_profile(const Graph& g) {
    DegreeProfile p;
    p.max_deg = g.max_degree();
    p.min_deg = g.min_degree();
    p.counts.assign(static_cast<std::size_t>(p.max_deg) + 1, 0);
    for (int v = 0; v < g.n; ++v) ++p.counts[static_cast<std::size_t>(g.degree(v))];
    return p;
}

namespace {

bool all_canonical_labels(const Graph& g) {
    for (int v = 0; v < g.n; ++v)
        if (g.labels[static_cast<std::size_t>(v)] != std::to_string(v)) return false;
    return true;
}

}  // namespace

Graph load_graph(const std::string& text) {
    std::map<std::string, int> ids;
    std::vector<std::string> labels;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.insert({tok, static_cast<int>(labels.size())});
        if (fresh) labels.push_back(tok);
        return it->second;
    };

    std::vector<std::pair<int, int>> edge_list;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    long long declared = -1;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;  // blank
        if (a == "vertices:") {
            if (!(ls >> b) || (ls >> extra))
                throw ParseError(line_no, "expected 'vertices: N'");
            try {
                std::size_t pos = 0;
                declared = std::stoll(b, &pos);
                if (pos != b.size() || declared < 0) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad vertex count '" + b + "'");
            }
            if (declared > 50'000'000) throw ParseError(line_no, "vertex count too large");
            for (long long v = 0; v < declared; ++v) intern(std::to_string(v));
            continue;
        }
        if (!(ls >> b)) {
            intern(a);  // isolated-vertex declaration
            continue;
        }
        if (ls >> extra) throw ParseError(line_no, "trailing token '" + extra + "'");
        int u = intern(a), v = intern(b);
        if (u == v) throw ParseError(line_no, "loop edge at '" + a + "'");
        edge_list.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(edge_list.begin(), edge_list.end());
    auto dup = std::adjacent_find(edge_list.begin(), edge_list.end());
    if (dup != edge_list.end())
        throw ParseError(line_no, "duplicate edge " + labels[static_cast<std::size_t>(dup->first)] +
                                      " " + labels[static_cast<std::size_t>(dup->second)]);
    Graph g = Graph::from_edges(static_cast<int>(labels.size()), std::move(edge_list));
    g.labels = std::move(labels);
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str());
}

std::string save_graph(const Graph& g) {
    std::ostringstream out;
    std::vector<bool> touched(static_cast<std::size_t>(g.n), false);
    for (auto [u, v] : g.edges) {
        touched[static_cast<std::size_t>(u)] = true;
        touched[static_cast<std::size_t>(v)] = true;
    }
    if (all_canonical_labels(g)) {
        out << "vertices: " << g.n << "\n";
    } else {
        for (int v = 0; v < g.n; ++v)
            if (!touched[static_cast<std::size_t>(v)]) out << g.label(v) << "\n";
    }
    for (auto [u, v] : g.edges) out << g.label(u) << " " << g.label(v) << "\n";
    return out.str();
}

bool is_vdec(const Graph& g) {
    int isolated = 0;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) == 0) ++isolated;
    if (isolated > 1) return false;
    for (auto [u, v] : g.edges)
        if (g.degree(u) == 1 && g.degree(v) == 1) return false;
    return true;
}

bool binomial_at_least(int k, int d, long long need) {
    if (need <= 0) return true;
    if (d < 0 || d > k) return false;
    mpz_t binom;
    mpz_init(binom);
    mpz_bin_uiui(binom, static_cast<unsigned long>(k), static_cast<unsigned long>(d));
    bool ok = mpz_cmp_ui(binom, static_cast<unsigned long>(need)) >= 0;
    mpz_clear(binom);
    return ok;
}

int k_lower_bound(const Graph& g) {
    if (!is_vdec(g)) throw NotVdecError("k lower bound requires a feasible graph");
    DegreeProfile prof = degree_profile(g);
    int best = 1;
    mpz_t binom;
    mpz_init(binom);
    for (int d = 1; d <= prof.max_deg; ++d) {
        long long need = prof.counts[static_cast<std::size_t>(d)];
        if (need <= 0) continue;
        int k = std::max(best, d);
        for (;; ++k) {
            mpz_bin_uiui(binom, static_cast<unsigned long>(k), static_cast<unsigned long>(d));
            if (mpz_cmp_ui(binom, static_cast<unsigned long>(need)) >= 0) break;
        }
        best = k;
    }
    mpz_clear(binom);
    return best;
}

std::vector<std::vector<int>> components(const Graph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
    for (int start = 0; start < g.n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> comp, stack{start};
        seen[static_cast<std::size_t>(start)] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (auto [w, e] : g.adj[static_cast<std::size_t>(v)]) {
                (void)e;
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

Contraction contract_components(const Graph& g, const std::vector<int>& s,
                                const std::vector<std::vector<int>>& comps) {
    std::vector<int> owner(static_cast<std::size_t>(g.n), -1);  // vertex -> component index
    std::vector<int> s_sorted = s;
    std::sort(s_sorted.begin(), s_sorted.end());
    if (std::adjacent_find(s_sorted.begin(), s_sorted.end()) != s_sorted.end())
        throw PreconditionError("contract_components: duplicate vertex in s");
    std::vector<int> side(static_cast<std::size_t>(g.n), 0);  // 1 = in s
    for (int v : s_sorted) {
        if (v < 0 || v >= g.n) throw PreconditionError("contract_components: s out of range");
        side[static_cast<std::size_t>(v)] = 1;
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (int v : comps[i]) {
            if (v < 0 || v >= g.n || side[static_cast<std::size_t>(v)] ||
                owner[static_cast<std::size_t>(v)] != -1)
                throw PreconditionError("contract_components: comps overlap or touch s");
            owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
    }
    // Listed comps must be whole components of g - s: no edge may connect one
    // to another or to an unlisted vertex outside s. Unlisted components are
    // legal and simply dropped from the contraction.
    for (auto [u, v] : g.edges) {
        if (side[static_cast<std::size_t>(u)] || side[static_cast<std::size_t>(v)]) continue;
        int ou = owner[static_cast<std::size_t>(u)], ov = owner[static_cast<std::size_t>(v)];
        if (ou != ov)
            throw PreconditionError("contract_components: a listed component is not closed");
    }

    Contraction res;
    res.s_vertices = s_sorted;
    std::vector<int> s_index(static_cast<std::size_t>(g.n), -1);
    for (std::size_t i = 0; i < s_sorted.size(); ++i)
        s_index[static_cast<std::size_t>(s_sorted[i])] = static_cast<int>(i);
    res.comp_vertex.resize(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i)
        res.comp_vertex[i] = static_cast<int>(s_sorted.size() + i);

    std::map<std::pair<int, int>, int> mult;
    for (auto [u, v] : g.edges) {
        bool su = side[static_cast<std::size_t>(u)], sv = side[static_cast<std::size_t>(v)];
        if (su == sv) continue;  // inside s or inside a component
        int comp = su ? owner[static_cast<std::size_t>(v)] : owner[static_cast<std::size_t>(u)];
        if (comp == -1) continue;  // edge to an unlisted component
        int sb = su ? s_index[static_cast<std::size_t>(u)] : s_index[static_cast<std::size_t>(v)];
        ++mult[{sb, res.comp_vertex[static_cast<std::size_t>(comp)]}];
    }
    std::vector<std::tuple<int, int, int>> medges;
    medges.reserve(mult.size());
    for (auto& [key, m] : mult) medges.push_back({key.first, key.second, m});
    res.b = Multigraph::from_edges(static_cast<int>(s_sorted.size() + comps.size()),
                                   std::move(medges));
    return res;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& verts,
                       std::vector<int>* to_host) {
    std::vector<int> sorted = verts;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> local(static_cast<std::size_t>(g.n), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        local[static_cast<std::size_t>(sorted[i])] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edge_list;
    for (auto [u, v] : g.edges) {
        int lu = local[static_cast<std::size_t>(u)], lv = local[static_cast<std::size_t>(v)];
        if (lu != -1 && lv != -1) edge_list.push_back({lu, lv});
    }
    Graph sub = Graph::from_edges(static_cast<int>(sorted.size()), std::move(edge_list));
    for (std::size_t i = 0; i < sorted.size(); ++i)
        sub.labels[i] = g.labels[static_cast<std::size_t>(sorted[i])];
    if (to_host) *to_host = sorted;
    return sub;
}

Graph remove_edges(const Graph& g, const std::vector<int>& edge_ids) {
    std::vector<bool> drop(g.edges.size(), false);
    for (int e : edge_ids) {
        if (e < 0 || e >= g.edge_count()) throw PreconditionError("remove_edges: bad edge id");
        drop[static_cast<std::size_t>(e)] = true;
    }
    std::vector<std::pair<int, int>> kept;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!drop[static_cast<std::size_t>(e)]) kept.push_back(g.edges[static_cast<std::size_t>(e)]);
    Graph h = Graph::from_edges(g.n, std::move(kept));
    h.labels = g.labels;
    return h;
}

}  // namespace vdec
