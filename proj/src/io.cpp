#include "dgplab/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json grid_to_json(const Grid& g) {
  json lo = json::array(), hi = json::array();
  for (int a = 0; a < g.dim(); ++a) {
    lo.push_back(g.lo(a));
    hi.push_back(g.hi(a));
  }
  return {{"dim", g.dim()}, {"lo", lo}, {"hi", hi}, {"points_per_axis", g.points_per_axis()}};
}

Grid grid_from_json(const json& j) {
  try {
    return Grid(j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>(),
                j.at("points_per_axis").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_field(const fs::path& stem, const Field& f) {
  static_assert(std::endian::native == std::endian::little, "field files are little-endian");
  fs::path header = stem, data = stem;
  header += ".json";
  data += ".bin";
  json h = {{"format", "dgplab-field"},
            {"version", 1},
            {"grid", grid_to_json(f.grid())},
            {"ordering", "lexicographic, axis 0 fastest"},
            {"encoding", "float64-le"},
            {"values_file", data.filename().string()},
            {"count", f.size()},
            {"provenance", f.provenance()}};
  write_text_file(header, h.dump(2) + "\n");
  std::ofstream out(data, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + data.string());
  out.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
}

Field read_field(const fs::path& stem) {
  fs::path header = stem;
  header += ".json";
  const json h = read_json_file(header);
  if (h.value("format", "") != "dgplab-field") throw ConfigError("not a field header: " + header.string());
  const Grid g = grid_from_json(h.at("grid"));
  const fs::path data = header.parent_path() / h.at("values_file").get<std::string>();
  std::ifstream in(data, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + data.string());
  std::vector<double> v(g.size());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw ConfigError("field value block too short: " + data.string());
  return Field(g, std::move(v), h.value("provenance", ""));
}

void write_field_csv(const fs::path& path, const Field& f) {
  std::ostringstream o;
  const Grid& g = f.grid();
  for (int a = 0; a < g.dim(); ++a) o << 'x' << a << ',';
  o << "value\n";
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    for (double c : x) o << format_double(c) << ',';
    o << format_double(f[i]) << '\n';
  }
  write_text_file(path, o.str());
}

json graph_to_json(const GraphSpec& g) {
  return {{"q", g.q}, {"d", g.dims}, {"t", g.t}, {"S", g.active}};
}

GraphSpec graph_from_json(const json& j) {
  try {
    GraphSpec g;
    g.q = j.at("q").get<int>();
    g.dims = j.at("d").get<std::vector<int>>();
    g.t = j.at("t").get<std::vector<int>>();
    g.active = j.at("S").get<std::vector<std::vector<std::vector<int>>>>();
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

json structure_to_json(const Structure& s) { return {{"graph", graph_to_json(s.graph)}, {"alpha", s.alphas}}; }

Structure structure_from_json(const json& j) {
  try {
    return {graph_from_json(j.at("graph")), j.at("alpha").get<std::vector<double>>()};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("structure: ") + e.what());
  }
}

Problem problem_from_json(const json& j) {
  try {
    const std::string kind = j.value("kind", "darcy");
    const int d = j.value("d", 1);
    const int points = j.value("points", d == 1 ? 129 : 65);
    const double margin = j.value("margin", 0.25);
    const Grid grid = Grid::cube(d, points, margin);
    CgOptions solver;
    solver.relative_tolerance = j.value("tolerance", 1e-10);
    if (kind == "darcy") {
      DarcyConfig c;
      c.grid = grid;
      c.k_min = j.value("k_min", 1.0);
      const double g = j.value("source", 1.0);
      c.source = Field(grid, g);
      c.g_min = j.value("g_min", std::abs(g));
      c.solver = solver;
      c.validate();
      return c;
    }
    if (kind == "schrodinger") {
      SchrodingerConfig c;
      c.grid = grid;
      const double h = j.value("boundary", 1.0);
      c.boundary = Field(grid, h);
      c.h_min = j.value("h_min", h);
      c.solver = solver;
      c.validate();
      return c;
    }
    if (kind == "identity") return IdentityConfig{grid};
    throw ConfigError("problem: unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

json problem_to_json(const Problem& p) {
  const Grid& g = problem_grid(p);
  json j = {{"kind", to_string(problem_kind(p))},
            {"d", g.dim()},
            {"points", g.points_per_axis()},
            {"margin", g.hi(0) - 1.0}};
  if (const auto* c = std::get_if<DarcyConfig>(&p)) {
    j["k_min"] = c->k_min;
    j["source"] = c->source[0];
    j["g_min"] = c->g_min;
    j["tolerance"] = c->solver.relative_tolerance;
  } else if (const auto* s = std::get_if<SchrodingerConfig>(&p)) {
    j["boundary"] = s->boundary[0];
    j["h_min"] = s->h_min;
    j["tolerance"] = s->solver.relative_tolerance;
  }
  return j;
}

json solver_stats_to_json(const SolverStats& s) {
  return {{"iterations", s.iterations}, {"relative_residual", s.relative_residual}};
}

}  // namespace dgplab
