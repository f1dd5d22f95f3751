#include "vdec/json_io.hpp"

#include <fstream>

#include "vdec/errors.hpp"

namespace vdec {

ojson coloring_to_json(const EdgeColoring& c) {
    ojson j;
    j["palette"] = c.palette;
    j["edges"] = ojson::array();
    for (int e = 0; e < c.host.edge_count(); ++e) {
        const auto& [u, v] = c.host.edges[static_cast<std::size_t>(e)];
        ojson row;
        row["u"] = c.host.label(u);
        row["v"] = c.host.label(v);
        row["color"] = c.color[static_cast<std::size_t>(e)];
        j["edges"].push_back(std::move(row));
    }
    return j;
}

ojson forest_to_json(const Graph& g, const LinearForest& f) {
    ojson j;
    j["paths"] = ojson::array();
    for (const auto& path : f.paths) {
        ojson row = ojson::array();
        for (int v : path) row.push_back(g.label(v));
        j["paths"].push_back(std::move(row));
    }
    j["uncovered"] = ojson::array();
    for (int v : f.uncovered) j["uncovered"].push_back(g.label(v));
    return j;
}

ojson trace_to_json(const PipelineTrace& trace) {
    ojson j;
    j["master_seed"] = trace.master_seed;
    j["stages"] = ojson::array();
    for (const auto& s : trace.stages) {
        ojson row;
        row["name"] = s.name;
        row["palette_lo"] = s.palette_lo;
        row["palette_hi"] = s.palette_hi;
        row["vertices"] = s.vertices;
        row["edges"] = s.edges;
        row["elapsed_ms"] = s.elapsed_ms;
        row["seeds"] = s.seeds;
        j["stages"].push_back(std::move(row));
    }
    return j;
}

ojson report_to_json(const VerificationReport& report) {
    ojson j;
    j["passed"] = report.passed();
    j["violations"] = ojson::array();
    for (const auto& v : report.violations) {
        ojson row;
        row["check"] = v.check;
        row["vertices"] = v.vertices;
        row["edges"] = v.edges;
        j["violations"].push_back(std::move(row));
    }
    return j;
}

void write_json_file(const std::string& path, const ojson& j) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace vdec
