#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dgplab/field.hpp"
#include "dgplab/pde.hpp"
#include "dgplab/structure.hpp"

namespace dgplab {

using json = nlohmann::json;

json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);

/// Field file format: `<stem>.json` holds the header (grid, ordering, provenance,
/// encoding) and `<stem>.bin` the values as little-endian float64 in
/// lexicographic order, axis 0 fastest.
void write_field(const std::filesystem::path& stem, const Field& f);
Field read_field(const std::filesystem::path& stem);

/// One row per node: x0, ..., x{d-1}, value.
void write_field_csv(const std::filesystem::path& path, const Field& f);

json structure_to_json(const Structure& s);
Structure structure_from_json(const json& j);
json graph_to_json(const GraphSpec& g);
GraphSpec graph_from_json(const json& j);

/// Problem document:
///   {"kind": "darcy" | "schrodinger" | "identity", "d": 1, "points": 129, "margin": 0.25,
///    "k_min": 1, "source": 1.0, "g_min": ..., "boundary": 1.0, "h_min": ..., "tolerance": 1e-10}
/// source and boundary are constants.
Problem problem_from_json(const json& j);
json problem_to_json(const Problem& p);

json solver_stats_to_json(const SolverStats& s);

/// Reads a whole JSON file; ConfigError on missing file or parse failure.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

}  // namespace dgplab
