#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "vdec/edge_coloring.hpp"
#include "vdec/generate.hpp"
#include "vdec/graph.hpp"
#include "vdec/json_io.hpp"
#include "vdec/path_factor.hpp"
#include "vdec/pipeline.hpp"
#include "vdec/verify.hpp"

using namespace vdec;

namespace {

std::string scratch_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/vdec_cli_XXXXXX";
        char* made = mkdtemp(tmpl);
        REQUIRE(made != nullptr);
        return std::string(made);
    }();
    return dir;
}

std::string scratch_path(const std::string& name) { return scratch_dir() + "/" + name; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = scratch_path("stdout" + std::to_string(counter));
    std::string err_path = scratch_path("stderr" + std::to_string(counter));
    ++counter;
    std::string cmd = std::string(VDEC_CLI_PATH) + " " + args + " >" + out_path +
                      " 2>" + err_path;
    int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text(out_path);
    r.err = read_text(err_path);
    return r;
}

}  // namespace

TEST_CASE("[CliIo] coloring JSON freezes field order and labels") {
    Graph p3 = gen_path(3);
    EdgeColoring c;
    c.host = p3;
    c.palette = 2;
    c.color = {1, 2};
    CHECK(coloring_to_json(c).dump() ==
          R"({"palette":2,"edges":[{"u":"0","v":"1","color":1},{"u":"1","v":"2","color":2}]})");

    // labels survive the round trip
    Graph named = load_graph("alpha beta\nbeta gamma\n");
    EdgeColoring nc;
    nc.host = named;
    nc.palette = 2;
    nc.color = {1, 2};
    ojson j = coloring_to_json(nc);
    CHECK(j["edges"][0]["u"] == "alpha");
    CHECK(j["edges"][1]["v"] == "gamma");
}

TEST_CASE("[CliIo] forest JSON lists paths and uncovered by label") {
    Graph c5 = gen_cycle(5);
    LinearForest f = LinearForest::from_paths(c5, {{0, 1, 2}});
    ojson j = forest_to_json(c5, f);
    CHECK(j.dump() == R"({"paths":[["0","1","2"]],"uncovered":["3","4"]})");
}

TEST_CASE("[CliIo] trace JSON carries stages, seeds and timings") {
    Graph c5 = gen_cycle(5);
    PipelineTrace tr;
    general_vdec(c5, 9, &tr);
    ojson j = trace_to_json(tr);
    CHECK(j["master_seed"] == 9);
    REQUIRE(j["stages"].size() == 6);
    CHECK(j["stages"][0]["name"] == "linear_forest");
    CHECK(j["stages"][0]["seeds"].size() == 1);
    CHECK(j["stages"][5]["name"] == "verify");
    for (auto& s : j["stages"]) {
        CHECK(s["elapsed_ms"].is_number());
        CHECK(s["palette_hi"].is_number_integer());
    }
}

TEST_CASE("[CliIo] report JSON mirrors the violation list") {
    Graph c4 = gen_cycle(4);
    EdgeColoring c;
    c.host = c4;
    c.palette = 2;
    c.color = {1, 2, 2, 1};
    ojson j = report_to_json(verify_vd(c4, c));
    CHECK(j["passed"] == false);
    REQUIRE(j["violations"].size() == 6);
    CHECK(j["violations"][0]["check"] == "equal_color_sets");
    CHECK(j["violations"][0]["vertices"] == ojson::array({0, 1}));

    ojson ok = report_to_json(verify_proper(c4, c));
    CHECK(ok["passed"] == true);
    CHECK(ok["violations"].empty());
}

TEST_CASE("[CliIo] write_json_file emits indented JSON plus newline") {
    ojson j;
    j["a"] = 1;
    std::string path = scratch_path("roundtrip.json");
    write_json_file(path, j);
    std::string text = read_text(path);
    CHECK(text == "{\n  \"a\": 1\n}\n");
    CHECK_THROWS_AS(write_json_file("/nonexistent_dir/x.json", j), PreconditionError);
}

TEST_CASE("[CliIo] fixed-shape generators") {
    Graph c5 = gen_cycle(5);
    CHECK(c5.n == 5);
    CHECK(c5.edge_count() == 5);
    for (int v = 0; v < 5; ++v) CHECK(c5.degree(v) == 2);
    CHECK_THROWS_AS(gen_cycle(2), PreconditionError);

    Graph p1 = gen_path(1);
    CHECK(p1.edge_count() == 0);
    Graph p5 = gen_path(5);
    CHECK(p5.edge_count() == 4);
    CHECK(p5.degree(0) == 1);
    CHECK(p5.degree(2) == 2);
    CHECK_THROWS_AS(gen_path(0), PreconditionError);

    Graph star = gen_star(6);
    CHECK(star.degree(0) == 5);
    for (int v = 1; v < 6; ++v) CHECK(star.degree(v) == 1);
    CHECK_THROWS_AS(gen_star(1), PreconditionError);
}

TEST_CASE("[CliIo] tree generator yields connected trees deterministically") {
    CHECK(gen_tree(1, 5).edge_count() == 0);
    CHECK(gen_tree(2, 5).edge_count() == 1);
    for (std::uint64_t seed : {3u, 17u, 90u}) {
        Graph t = gen_tree(30, seed);
        CHECK(t.edge_count() == 29);
        CHECK(components(t).size() == 1);
        CHECK(t.edges == gen_tree(30, seed).edges);
    }
}

TEST_CASE("[CliIo] gnp generator spans the density range") {
    CHECK(gen_gnp(10, 0.0, 4).edge_count() == 0);
    CHECK(gen_gnp(10, 1.0, 4).edge_count() == 45);
    Graph a = gen_gnp(20, 0.4, 11);
    CHECK(a.edges == gen_gnp(20, 0.4, 11).edges);
    CHECK(a.edge_count() > 0);
    CHECK(a.edge_count() < 190);
}

TEST_CASE("[CliIo] regular generator produces simple regular graphs") {
    for (auto [n, d] : std::vector<std::pair<int, int>>{{16, 3}, {20, 7}, {64, 8}}) {
        Graph g = gen_regular(n, d, 13);
        CHECK(g.n == n);
        CHECK(g.edge_count() == n * d / 2);
        for (int v = 0; v < n; ++v) CHECK(g.degree(v) == d);
        CHECK(g.edges == gen_regular(n, d, 13).edges);
    }
    CHECK(gen_regular(5, 0, 1).edge_count() == 0);
    CHECK_THROWS_AS(gen_regular(5, 3, 1), PreconditionError);   // odd product
    CHECK_THROWS_AS(gen_regular(4, 4, 1), PreconditionError);   // d >= n
    CHECK_THROWS_AS(gen_regular(0, 0, 1), PreconditionError);
}

TEST_CASE("[CliIo] cli kbound prints the bound and the degree profile") {
    write_text(scratch_path("c5.txt"), save_graph(gen_cycle(5)));
    CliRun r = run_cli("kbound " + scratch_path("c5.txt"));
    CHECK(r.exit_code == 0);
    CHECK(r.out == "4\nn=5 m=5\nd=2: 5\n");
}

TEST_CASE("[CliIo] cli gen matches the library generators") {
    CliRun r = run_cli("gen cycle --n 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out == save_graph(gen_cycle(5)));

    CliRun reg = run_cli("gen regular --n 16 --d 3 --seed 13 --out " +
                         scratch_path("r16.txt"));
    CHECK(reg.exit_code == 0);
    CHECK(read_text(scratch_path("r16.txt")) == save_graph(gen_regular(16, 3, 13)));

    CHECK(run_cli("gen regular --n 5 --d 3").exit_code == 3);
    CHECK(run_cli("gen cycle").exit_code == 2);            // --n missing
    CHECK(run_cli("gen moebius --n 5").exit_code == 2);    // unknown kind
}

TEST_CASE("[CliIo] cli color writes a verifiable coloring and trace") {
    std::string graph_path = scratch_path("tree.txt");
    Graph tree = gen_tree(18, 4);
    write_text(graph_path, save_graph(tree));
    std::string out = scratch_path("tree_coloring.json");
    std::string trace = scratch_path("tree_trace.json");
    CliRun r = run_cli("color " + graph_path + " --method general --seed 6 --out " + out +
                       " --trace " + trace);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(" / ") != std::string::npos);

    ojson j = ojson::parse(read_text(out));
    EdgeColoring c;
    c.host = tree;
    c.palette = j["palette"].get<int>();
    for (auto& row : j["edges"]) {
        int u = std::stoi(row["u"].get<std::string>());
        int v = std::stoi(row["v"].get<std::string>());
        c.color.push_back(row["color"].get<int>());
        CHECK(tree.edge_id(u, v) == static_cast<int>(c.color.size()) - 1);
    }
    CHECK(verify_vd(tree, c).passed());

    ojson t = ojson::parse(read_text(trace));
    CHECK(t["master_seed"] == 6);
    CHECK(t["stages"].size() == 6);

    // same seed, byte-identical coloring file
    std::string out2 = scratch_path("tree_coloring2.json");
    run_cli("color " + graph_path + " --method general --seed 6 --out " + out2 +
            " --trace " + scratch_path("tree_trace2.json"));
    CHECK(read_text(out) == read_text(out2));
}

TEST_CASE("[CliIo] cli exit codes distinguish failure families") {
    std::string p2 = scratch_path("p2.txt");
    write_text(p2, save_graph(gen_path(2)));
    std::string dummy_out = scratch_path("dummy.json");
    std::string dummy_trace = scratch_path("dummy_trace.json");
    std::string sink = " --out " + dummy_out + " --trace " + dummy_trace;
    CHECK(run_cli("color " + p2 + " --method general" + sink).exit_code == 3);

    std::string loop = scratch_path("loop.txt");
    write_text(loop, "0 0\n");
    CHECK(run_cli("color " + loop + " --method general" + sink).exit_code == 2);
    CHECK(run_cli("kbound " + scratch_path("missing.txt")).exit_code == 2);
    CHECK(run_cli("color " + p2 + " --method bogus" + sink).exit_code == 2);

    std::string c5 = scratch_path("c5b.txt");
    write_text(c5, save_graph(gen_cycle(5)));
    CHECK(run_cli("color " + c5 + " --method regular" + sink).exit_code == 3);
}

TEST_CASE("[CliIo] cli bench covers a corpus with one row per method") {
    std::string corpus = scratch_path("corpus");
    REQUIRE(std::system(("mkdir -p " + corpus).c_str()) == 0);
    write_text(corpus + "/c5.txt", save_graph(gen_cycle(5)));
    write_text(corpus + "/k2.txt", save_graph(gen_path(2)));
    std::string csv = scratch_path("bench.csv");
    CliRun r = run_cli("bench " + corpus + " --seed 3 --out " + csv);
    CHECK(r.exit_code == 0);

    std::istringstream rows(read_text(csv));
    std::string line;
    REQUIRE(std::getline(rows, line));
    CHECK(line == "name,n,m,k,method,colors_used,bound,verified,ms,error");
    std::vector<std::string> body;
    while (std::getline(rows, line)) body.push_back(line);
    REQUIRE(body.size() == 2);
    CHECK(body[0].find("c5.txt,5,5,4,general,") == 0);
    CHECK(body[0].find("true") != std::string::npos);
    CHECK(body[1].find("k2.txt,") == 0);
    CHECK(body[1].find("not-vdec") != std::string::npos);
}
