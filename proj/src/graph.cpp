#include "qgliss/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "qgliss/errors.hpp"

namespace qgliss {

MetricGraph::MetricGraph(std::vector<std::string> vertex_ids, std::vector<Edge> edges)
    : vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
  const int nv = vertex_count();
  if (nv < 1) throw ValidationError(ValidationError::Code::SizeMismatch, "graph needs at least one vertex");
  star_map_.assign(static_cast<std::size_t>(nv), {});
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    if (ed.from < 0 || ed.from >= nv || ed.to < 0 || ed.to >= nv)
      throw ValidationError(ValidationError::Code::SizeMismatch,
                            "edge '" + ed.id + "' references an unknown vertex");
    star_map_[static_cast<std::size_t>(ed.from)].push_back(e);
    if (ed.to != ed.from) star_map_[static_cast<std::size_t>(ed.to)].push_back(e);
  }
}

MetricGraph MetricGraph::star(int n_edges) {
  if (n_edges < 1) throw ValidationError(ValidationError::Code::SizeMismatch, "star needs n_edges >= 1");
  std::vector<std::string> vids;
  vids.reserve(static_cast<std::size_t>(n_edges) + 1);
  vids.push_back("0");
  std::vector<Edge> es;
  es.reserve(static_cast<std::size_t>(n_edges));
  for (int e = 1; e <= n_edges; ++e) {
    vids.push_back(std::to_string(e));
    es.push_back(Edge{"e" + std::to_string(e), 0, e});
  }
  return MetricGraph(std::move(vids), std::move(es));
}

MetricGraph MetricGraph::interval() { return star(1); }

bool MetricGraph::is_connected() const {
  const int nv = vertex_count();
  if (nv == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(nv), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : star_of(v)) {
      const Edge& ed = edges_[static_cast<std::size_t>(e)];
      const int w = (ed.from == v) ? ed.to : ed.from;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool MetricGraph::has_loop() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.from == e.to; });
}

std::optional<int> MetricGraph::star_center() const {
  if (edge_count() == 0 || has_loop()) return std::nullopt;
  if (edge_count() == 1) return edges_[0].from;
  // A center must touch every edge.
  for (int c = 0; c < vertex_count(); ++c) {
    if (degree(c) != edge_count()) continue;
    bool ok = true;
    for (const Edge& ed : edges_) {
      const int other = (ed.from == c) ? ed.to : (ed.to == c ? ed.from : -1);
      if (other < 0 || degree(other) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
  return std::nullopt;
}

int MetricGraph::vertex_index(const std::string& id) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (vertex_ids_[static_cast<std::size_t>(v)] == id) return v;
  throw ConfigError("unknown vertex id '" + id + "'");
}

}  // namespace qgliss
