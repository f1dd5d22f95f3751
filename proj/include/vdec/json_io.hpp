#pragma once

#include <string>

#include "json.hpp"
#include "vdec/edge_coloring.hpp"
#include "vdec/path_factor.hpp"
#include "vdec/pipeline.hpp"
#include "vdec/verify.hpp"

namespace vdec {

using ojson = nlohmann::ordered_json;

// {"palette": K, "edges": [{"u": label, "v": label, "color": c}, ...]},
// one object per edge in edge-id order.
ojson coloring_to_json(const EdgeColoring& c);

// {"paths": [[label, ...], ...], "uncovered": [label, ...]}.
ojson forest_to_json(const Graph& g, const LinearForest& f);

// {"master_seed": ..., "stages": [{name, palette_lo, palette_hi, vertices,
// edges, elapsed_ms, seeds}, ...]}.
ojson trace_to_json(const PipelineTrace& trace);

// {"passed": bool, "violations": [{check, vertices, edges}, ...]} in the
// order the checks recorded them.
ojson report_to_json(const VerificationReport& report);

// Serializes with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const ojson& j);

}  // namespace vdec
