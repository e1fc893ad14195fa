#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace tpgm {

using Vector = std::vector<double>;
/// Set-valued attribute: an unordered collection of equal-length points.
using PointSet = std::vector<Vector>;
using NodeAttr = std::variant<Vector, PointSet>;

enum class AttrKind { vector, point_set };

AttrKind kind_of(const NodeAttr& a);
/// Vector length, or point dimension for point sets.
std::size_t dimension_of(const NodeAttr& a);

struct Arc {
  std::size_t src = 0;
  std::size_t dst = 0;
  Vector attr;
};

/// Directed attributed graph G(V, E, alpha, beta).
///
/// Arcs are stored sorted by (src, dst). For undirected graphs each input edge
/// {i, j} is stored as the two arcs (i, j) and (j, i) with the same attribute;
/// supplying both orientations of one edge is accepted when the attributes
/// agree, so re-importing the arc list of an undirected graph is a no-op.
/// Immutable after construction.
class AttributedGraph {
 public:
  AttributedGraph() = default;
  AttributedGraph(std::vector<NodeAttr> nodes, std::vector<Arc> edges, bool directed = true);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  bool directed() const noexcept { return directed_; }

  const NodeAttr& node(std::size_t v) const;
  const std::vector<NodeAttr>& nodes() const noexcept { return nodes_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const Arc& arc(std::size_t a) const { return arcs_.at(a); }

  /// Kind of the node attributes; vector for an empty graph.
  AttrKind node_kind() const noexcept { return node_kind_; }
  std::size_t node_dim() const noexcept { return node_dim_; }
  std::size_t edge_dim() const noexcept { return edge_dim_; }

  /// Indices (into arcs()) of the arcs leaving v, ordered by destination.
  std::span<const std::size_t> out_arcs(std::size_t v) const;
  /// Indices of the arcs entering v, ordered by source.
  std::span<const std::size_t> in_arcs(std::size_t v) const;

  std::optional<std::size_t> find_arc(std::size_t src, std::size_t dst) const;

  /// Undirected edges once each (src < dst) for undirected graphs, every arc
  /// otherwise. Used by serialization.
  std::vector<Arc> edge_list() const;

 private:
  void check_node(std::size_t v) const;

  std::vector<NodeAttr> nodes_;
  std::vector<Arc> arcs_;
  bool directed_ = true;
  AttrKind node_kind_ = AttrKind::vector;
  std::size_t node_dim_ = 0;
  std::size_t edge_dim_ = 0;
  std::vector<std::size_t> out_ptr_{0};
  std::vector<std::size_t> in_ptr_{0};
  std::vector<std::size_t> out_arcs_;
  std::vector<std::size_t> in_arcs_;

  friend std::size_t out_degree(const AttributedGraph&, std::size_t);
  friend std::size_t in_degree(const AttributedGraph&, std::size_t);
};

/// Number of arcs leaving v.
std::size_t out_degree(const AttributedGraph& g, std::size_t v);
/// Number of arcs entering v.
std::size_t in_degree(const AttributedGraph& g, std::size_t v);

std::vector<std::size_t> out_degrees(const AttributedGraph& g);
std::vector<std::size_t> in_degrees(const AttributedGraph& g);

bool operator==(const AttributedGraph& a, const AttributedGraph& b);

}  // namespace tpgm
