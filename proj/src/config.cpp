#include "qgliss/config.hpp"

#include <cmath>
#include <fstream>

#include "qgliss/errors.hpp"

namespace qgliss {

using nlohmann::json;

namespace {

std::string id_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ConfigError("vertex/edge ids must be strings or integers");
}

std::vector<double> dvec(const json& j, const char* name) {
  if (!j.is_array()) throw ConfigError(std::string(name) + " must be an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(name) + " entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

Problem load_problem(const json& j) {
  if (!j.contains("vertices") || !j.contains("edges") || !j.contains("path"))
    throw ConfigError("config needs 'vertices', 'edges' and 'path'");

  std::vector<std::string> vids;
  for (const auto& v : j.at("vertices")) vids.push_back(id_string(v));

  auto vindex = [&](const std::string& id) {
    for (std::size_t i = 0; i < vids.size(); ++i)
      if (vids[i] == id) return static_cast<int>(i);
    throw ConfigError("edge references unknown vertex '" + id + "'");
  };

  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    Edge ed;
    ed.id = e.contains("id") ? id_string(e.at("id")) : ("e" + std::to_string(edges.size() + 1));
    ed.from = vindex(id_string(e.at("from")));
    ed.to = vindex(id_string(e.at("to")));
    edges.push_back(ed);
  }

  const auto& pj = j.at("path");
  LissajousPath path;
  path.mean_length = dvec(pj.at("Lbar"), "path.Lbar");
  path.amplitude = dvec(pj.at("rho"), "path.rho");
  path.phase = dvec(pj.at("alpha"), "path.alpha");
  for (const auto& x : pj.at("nu")) {
    if (!x.is_number_integer() || x.get<long long>() < 1)
      throw ConfigError("path.nu entries must be positive integers");
    path.frequency.push_back(x.get<int>());
  }
  if (pj.contains("T")) path.adiabatic_scale = pj.at("T").get<double>();

  Problem p{MetricGraph(std::move(vids), std::move(edges)), std::move(path),
            j.contains("options") ? j.at("options") : json::object()};
  const auto issues = validate(p.graph, p.path);
  if (!issues.empty()) throw ConfigError("invalid config: " + issues.front().message);
  return p;
}

Problem load_problem_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ConfigError("config parse error in '" + file + "': " + ex.what());
  }
  return load_problem(j);
}

json problem_to_json(const Problem& p) {
  json j;
  j["vertices"] = p.graph.vertex_ids();
  json edges = json::array();
  for (const auto& e : p.graph.edges()) {
    edges.push_back({{"id", e.id},
                     {"from", p.graph.vertex_ids()[static_cast<std::size_t>(e.from)]},
                     {"to", p.graph.vertex_ids()[static_cast<std::size_t>(e.to)]}});
  }
  j["edges"] = std::move(edges);
  j["path"] = {{"Lbar", p.path.mean_length},
               {"rho", p.path.amplitude},
               {"nu", p.path.frequency},
               {"alpha", p.path.phase},
               {"T", p.path.adiabatic_scale}};
  if (!p.options.empty()) j["options"] = p.options;
  return j;
}

LissajousPath canonicalize_alpha(const LissajousPath& path) {
  LissajousPath out = path;
  if (out.edge_count() == 0) return out;
  const double twopi = 2.0 * M_PI;
  const double shift = out.phase[0] / out.frequency[0];
  for (std::size_t e = 0; e < out.edge_count(); ++e) {
    double a = out.phase[e] - out.frequency[e] * shift;
    a = std::fmod(a, twopi);
    if (a < 0.0) a += twopi;
    out.phase[e] = a;
  }
  out.phase[0] = 0.0;
  return out;
}

}  // namespace qgliss
