#pragma once

#include <string>

#include <json.hpp>

#include "qgliss/graph.hpp"
#include "qgliss/path.hpp"

namespace qgliss {

/// A graph + path pair as described by a JSON config file:
/// {"vertices":[...], "edges":[{"id","from","to"}...],
///  "path":{"Lbar":[...], "rho":[...], "nu":[...], "alpha":[...], "T":...},
///  "options":{...}}
struct Problem {
  MetricGraph graph;
  LissajousPath path;
  nlohmann::json options;  // free-form defaults picked up by the CLI
};

Problem load_problem(const nlohmann::json& j);
Problem load_problem_file(const std::string& file);
nlohmann::json problem_to_json(const Problem& p);

/// Shifts the tau origin so that alpha_1 = 0 and reduces all phases to
/// [0, 2 pi). Optional normalization; the physics is origin-independent.
LissajousPath canonicalize_alpha(const LissajousPath& path);

}  // namespace qgliss
