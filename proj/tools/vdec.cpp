#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vdec/edge_coloring.hpp"
#include "vdec/errors.hpp"
#include "vdec/generate.hpp"
#include "vdec/graph.hpp"
#include "vdec/json_io.hpp"
#include "vdec/pipeline.hpp"
#include "vdec/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t env_seed() {
    const char* env = std::getenv("VDEC_SEED");
    if (env == nullptr || *env == '\0') return 0;
    return std::strtoull(env, nullptr, 10);
}

// floor(5.5*k + 6.5) as exact integer arithmetic.
long long general_bound(int k) { return (11LL * k + 13) / 2; }

void run_kbound(const std::string& path) {
    vdec::Graph g = vdec::load_graph_file(path);
    if (!vdec::is_vdec(g))
        throw vdec::NotVdecError("graph has an isolated edge or two isolated vertices");
    std::cout << vdec::k_lower_bound(g) << "\n";
    std::cout << "n=" << g.n << " m=" << g.edge_count() << "\n";
    if (g.n > 0) {
        vdec::DegreeProfile dp = vdec::degree_profile(g);
        for (int d = dp.min_deg; d <= dp.max_deg; ++d) {
            long long cnt = dp.counts[static_cast<std::size_t>(d)];
            if (cnt > 0) std::cout << "d=" << d << ": " << cnt << "\n";
        }
    }
}

void run_color(const std::string& path, const std::string& method, std::uint64_t seed,
               int exact_limit, int restarts, const std::string& out_path,
               const std::string& trace_path) {
    vdec::Graph g = vdec::load_graph_file(path);
    int big_k = vdec::k_lower_bound(g);

    vdec::EdgeColoring col;
    vdec::PipelineTrace tr;
    long long bound = 0;
    if (method == "general") {
        col = vdec::general_vdec(g, seed, &tr, exact_limit, restarts);
        bound = general_bound(big_k);
    } else if (method == "regular") {
        col = vdec::regular_vdec(g, seed, &tr, exact_limit, restarts);
        bound = big_k + 3;
    } else {
        auto t0 = Clock::now();
        std::optional<int> best = vdec::exact_chi_vd(g, -1, &col);
        if (!best)
            throw vdec::StageError("exact search found no coloring within k(G)+3 colors");
        bound = big_k + 3;
        tr.master_seed = seed;
        vdec::PipelineStage stage;
        stage.name = "exact_search";
        stage.palette_lo = 1;
        stage.palette_hi = *best;
        stage.vertices = g.n;
        stage.edges = g.edge_count();
        stage.elapsed_ms = ms_since(t0);
        tr.stages.push_back(stage);
        tr.recolored = col;
    }

    vdec::VerificationReport proper = vdec::verify_proper(g, col);
    vdec::VerificationReport vd = vdec::verify_vd(g, col);
    if (!proper.passed() || !vd.passed()) {
        const auto& bad = proper.passed() ? vd : proper;
        throw vdec::VerificationError("output coloring failed " + bad.violations.front().check);
    }

    vdec::write_json_file(out_path, vdec::coloring_to_json(col));
    vdec::write_json_file(trace_path, vdec::trace_to_json(tr));
    std::cout << col.colors_used() << " / " << bound << "\n";
}

void run_gen(const std::string& kind, int n, double p, int d, std::uint64_t seed,
             const std::string& out_path) {
    vdec::Graph g;
    if (kind == "gnp") {
        g = vdec::gen_gnp(n, p, seed);
    } else if (kind == "regular") {
        g = vdec::gen_regular(n, d, seed);
    } else if (kind == "cycle") {
        g = vdec::gen_cycle(n);
    } else if (kind == "path") {
        g = vdec::gen_path(n);
    } else if (kind == "star") {
        g = vdec::gen_star(n);
    } else {
        g = vdec::gen_tree(n, seed);
    }
    std::string text = vdec::save_graph(g);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw vdec::PreconditionError("cannot open for writing: " + out_path);
        out << text;
    }
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

void bench_row(std::ostream& out, const std::string& name, const vdec::Graph& g, int big_k,
               const std::string& method, std::uint64_t seed) {
    long long bound = method == "regular" ? big_k + 3 : general_bound(big_k);
    auto t0 = Clock::now();
    try {
        vdec::EdgeColoring col = method == "regular" ? vdec::regular_vdec(g, seed)
                                                     : vdec::general_vdec(g, seed);
        double ms = ms_since(t0);
        bool ok = vdec::verify_proper(g, col).passed() && vdec::verify_vd(g, col).passed();
        out << name << "," << g.n << "," << g.edge_count() << "," << big_k << "," << method
            << "," << col.colors_used() << "," << bound << "," << (ok ? "true" : "false")
            << "," << ms << ",\n";
    } catch (const vdec::Error& e) {
        double ms = ms_since(t0);
        out << name << "," << g.n << "," << g.edge_count() << "," << big_k << "," << method
            << ",0," << bound << ",false," << ms << "," << csv_safe(e.what()) << "\n";
    }
}

void run_bench(const std::string& corpus_dir, std::uint64_t seed, const std::string& out_path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(corpus_dir))
        throw vdec::PreconditionError("not a directory: " + corpus_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::ofstream file_out;
    if (!out_path.empty()) {
        file_out.open(out_path);
        if (!file_out) throw vdec::PreconditionError("cannot open for writing: " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file_out;

    out << "name,n,m,k,method,colors_used,bound,verified,ms,error\n";
    for (const auto& f : files) {
        std::string name = csv_safe(f.filename().string());
        vdec::Graph g;
        try {
            g = vdec::load_graph_file(f.string());
        } catch (const vdec::Error& e) {
            out << name << ",0,0,0,,0,0,false,0," << csv_safe(e.what()) << "\n";
            continue;
        }
        if (!vdec::is_vdec(g)) {
            out << name << "," << g.n << "," << g.edge_count() << ",0,,0,0,false,0,not-vdec\n";
            continue;
        }
        int big_k = vdec::k_lower_bound(g);
        bench_row(out, name, g, big_k, "general", seed);
        int d = g.n > 0 ? g.max_degree() : 0;
        bool regular_ok = g.n >= 256 && d < g.n - 1 && g.min_degree() == d && d < 62 &&
                          (1LL << d) >= g.n;
        if (regular_ok) bench_row(out, name, g, big_k, "regular", seed);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vertex-distinguishing proper edge colorings"};
    app.require_subcommand(1);

    std::uint64_t seed = env_seed();
    std::string in_path;
    std::string out_path;
    std::string trace_path = "trace.json";
    std::string method = "general";
    std::string kind;
    int n = 0;
    double p = 0.5;
    int d = 3;
    int exact_limit = 20;
    int restarts = 200;

    CLI::App* kbound = app.add_subcommand("kbound", "print the binomial lower bound k(G)");
    kbound->add_option("path", in_path, "graph file")->required();

    CLI::App* color = app.add_subcommand("color", "build a vertex-distinguishing coloring");
    color->add_option("path", in_path, "graph file")->required();
    color->add_option("--method", method, "general | regular | exact")
        ->check(CLI::IsMember({"general", "regular", "exact"}));
    color->add_option("--seed", seed, "master seed (default: $VDEC_SEED or 0)");
    color->add_option("--exact-limit", exact_limit, "max vertices for exact forest search")
        ->check(CLI::PositiveNumber);
    color->add_option("--restarts", restarts, "forest heuristic restart budget")
        ->check(CLI::PositiveNumber);
    color->add_option("--out", out_path, "coloring JSON path");
    color->add_option("--trace", trace_path, "trace JSON path");

    CLI::App* gen = app.add_subcommand("gen", "generate a graph file");
    gen->add_option("kind", kind, "gnp | regular | cycle | path | star | tree")
        ->required()
        ->check(CLI::IsMember({"gnp", "regular", "cycle", "path", "star", "tree"}));
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--p", p, "edge probability (gnp)");
    gen->add_option("--d", d, "degree (regular)");
    gen->add_option("--seed", seed, "generator seed (default: $VDEC_SEED or 0)");
    gen->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* bench = app.add_subcommand("bench", "run every applicable method over a corpus");
    bench->add_option("corpus", in_path, "directory of graph files")->required();
    bench->add_option("--seed", seed, "master seed (default: $VDEC_SEED or 0)");
    bench->add_option("--out", out_path, "CSV path (default: stdout)");

    kbound->callback([&] { run_kbound(in_path); });
    color->callback([&] {
        if (out_path.empty()) out_path = "coloring.json";
        run_color(in_path, method, seed, exact_limit, restarts, out_path, trace_path);
    });
    gen->callback([&] { run_gen(kind, n, p, d, seed, out_path); });
    bench->callback([&] { run_bench(in_path, seed, out_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const vdec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    }
    return 0;
}
