#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qgliss {

/// One edge of the metric graph. The scaled coordinate xi runs over
/// [-1/2, 1/2] from `from` (xi = -1/2) to `to` (xi = +1/2).
struct Edge {
  std::string id;
  int from = -1;
  int to = -1;
};

/// Combinatorial part of a quantum graph: vertices, edges and the star map
/// S_v of edge ids incident to each vertex. Multi-edges are allowed,
/// self-loops are not (the two-endpoint scaled coordinate is assumed
/// throughout).
class MetricGraph {
public:
  MetricGraph(std::vector<std::string> vertex_ids, std::vector<Edge> edges);

  /// Star with `n_edges` edges: center vertex "0", leaves "1".."n".
  /// All edges are oriented center -> leaf, so xi = -1/2 at the center.
  static MetricGraph star(int n_edges);

  /// Two Neumann vertices joined by one edge (= star(1)).
  static MetricGraph interval();

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  /// S_v: ids of edges incident to vertex v (loops would appear twice;
  /// they are rejected at construction).
  const std::vector<int>& star_of(int v) const {
    return star_map_[static_cast<std::size_t>(v)];
  }
  int degree(int v) const { return static_cast<int>(star_of(v).size()); }

  bool is_connected() const;
  bool has_loop() const;

  /// Index of the central vertex if the graph is a star (every edge joins
  /// the center to a degree-1 vertex). For the single interval either
  /// vertex qualifies; the edge's `from` endpoint is returned so that the
  /// center sits at xi = -1/2.
  std::optional<int> star_center() const;

  int vertex_index(const std::string& id) const;

private:
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> star_map_;
};

}  // namespace qgliss
