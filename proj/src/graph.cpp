#include "tpgm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpgm/error.hpp"

namespace tpgm {

namespace {

void check_finite(const Vector& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, std::string("non-finite ") + what);
}

}  // namespace

AttrKind kind_of(const NodeAttr& a) {
  return std::holds_alternative<Vector>(a) ? AttrKind::vector : AttrKind::point_set;
}

std::size_t dimension_of(const NodeAttr& a) {
  if (const auto* v = std::get_if<Vector>(&a)) return v->size();
  const auto& set = std::get<PointSet>(a);
  return set.empty() ? 0 : set.front().size();
}

AttributedGraph::AttributedGraph(std::vector<NodeAttr> nodes, std::vector<Arc> edges, bool directed)
    : nodes_(std::move(nodes)), directed_(directed) {
  const std::size_t n = nodes_.size();

  if (n > 0) {
    node_kind_ = kind_of(nodes_.front());
    node_dim_ = dimension_of(nodes_.front());
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto& a = nodes_[v];
    if (kind_of(a) != node_kind_)
      fail(ErrorKind::invalid_argument, "node " + std::to_string(v) +
                                            ": graphs may not mix vector and set attributes");
    if (const auto* set = std::get_if<PointSet>(&a)) {
      if (set->empty()) fail(ErrorKind::invalid_argument, "node " + std::to_string(v) + ": empty point set");
      for (const auto& p : *set) {
        if (p.size() != node_dim_)
          fail(ErrorKind::dimension, "node " + std::to_string(v) + ": point dimension mismatch");
        check_finite(p, "node attribute");
      }
    } else {
      const auto& vec = std::get<Vector>(a);
      if (vec.size() != node_dim_)
        fail(ErrorKind::dimension, "node " + std::to_string(v) + ": attribute dimension " +
                                       std::to_string(vec.size()) + ", expected " +
                                       std::to_string(node_dim_));
      check_finite(vec, "node attribute");
    }
  }

  if (!edges.empty()) edge_dim_ = edges.front().attr.size();
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n)
      fail(ErrorKind::invalid_argument, "edge (" + std::to_string(e.src) + "," +
                                            std::to_string(e.dst) + ") references a missing node");
    if (e.src == e.dst)
      fail(ErrorKind::invalid_argument, "self-loop at node " + std::to_string(e.src));
    if (e.attr.size() != edge_dim_)
      fail(ErrorKind::dimension, "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                                     "): attribute dimension mismatch");
    check_finite(e.attr, "edge attribute");
  }

  if (!directed_) {
    const std::size_t m = edges.size();
    edges.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) edges.push_back(Arc{edges[i].dst, edges[i].src, edges[i].attr});
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Arc& a, const Arc& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (auto& e : edges) {
    if (!arcs_.empty() && arcs_.back().src == e.src && arcs_.back().dst == e.dst) {
      // Undirected input may name both orientations of one edge.
      if (!directed_ && arcs_.back().attr == e.attr) continue;
      fail(ErrorKind::invalid_argument, "duplicate arc (" + std::to_string(e.src) + "," +
                                            std::to_string(e.dst) + ")");
    }
    arcs_.push_back(std::move(e));
  }

  out_ptr_.assign(n + 1, 0);
  in_ptr_.assign(n + 1, 0);
  for (const auto& a : arcs_) {
    out_ptr_[a.src + 1]++;
    in_ptr_[a.dst + 1]++;
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_ptr_[v + 1] += out_ptr_[v];
    in_ptr_[v + 1] += in_ptr_[v];
  }
  // Arcs are sorted by source, so the out-arc index is the identity.
  out_arcs_.resize(arcs_.size());
  for (std::size_t a = 0; a < arcs_.size(); ++a) out_arcs_[a] = a;
  in_arcs_.resize(arcs_.size());
  std::vector<std::size_t> next(in_ptr_.begin(), in_ptr_.end() - 1);
  for (std::size_t a = 0; a < arcs_.size(); ++a) in_arcs_[next[arcs_[a].dst]++] = a;
}

void AttributedGraph::check_node(std::size_t v) const {
  if (v >= nodes_.size())
    fail(ErrorKind::invalid_argument, "node index " + std::to_string(v) + " out of range (" +
                                          std::to_string(nodes_.size()) + " nodes)");
}

const NodeAttr& AttributedGraph::node(std::size_t v) const {
  check_node(v);
  return nodes_[v];
}

std::span<const std::size_t> AttributedGraph::out_arcs(std::size_t v) const {
  check_node(v);
  return std::span<const std::size_t>(out_arcs_).subspan(out_ptr_[v], out_ptr_[v + 1] - out_ptr_[v]);
}

std::span<const std::size_t> AttributedGraph::in_arcs(std::size_t v) const {
  check_node(v);
  return std::span<const std::size_t>(in_arcs_).subspan(in_ptr_[v], in_ptr_[v + 1] - in_ptr_[v]);
}

std::optional<std::size_t> AttributedGraph::find_arc(std::size_t src, std::size_t dst) const {
  check_node(src);
  check_node(dst);
  auto first = arcs_.begin() + static_cast<std::ptrdiff_t>(out_ptr_[src]);
  auto last = arcs_.begin() + static_cast<std::ptrdiff_t>(out_ptr_[src + 1]);
  auto it = std::lower_bound(first, last, dst, [](const Arc& a, std::size_t d) { return a.dst < d; });
  if (it == last || it->dst != dst) return std::nullopt;
  return static_cast<std::size_t>(it - arcs_.begin());
}

std::vector<Arc> AttributedGraph::edge_list() const {
  if (directed_) return arcs_;
  std::vector<Arc> out;
  for (const auto& a : arcs_)
    if (a.src < a.dst) out.push_back(a);
  return out;
}

std::size_t out_degree(const AttributedGraph& g, std::size_t v) {
  g.check_node(v);
  return g.out_ptr_[v + 1] - g.out_ptr_[v];
}

std::size_t in_degree(const AttributedGraph& g, std::size_t v) {
  g.check_node(v);
  return g.in_ptr_[v + 1] - g.in_ptr_[v];
}

std::vector<std::size_t> out_degrees(const AttributedGraph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (std::size_t v = 0; v < d.size(); ++v) d[v] = out_degree(g, v);
  return d;
}

std::vector<std::size_t> in_degrees(const AttributedGraph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (std::size_t v = 0; v < d.size(); ++v) d[v] = in_degree(g, v);
  return d;
}

bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
  if (a.directed() != b.directed() || a.nodes() != b.nodes() || a.arc_count() != b.arc_count())
    return false;
  for (std::size_t i = 0; i < a.arc_count(); ++i) {
    const auto& x = a.arc(i);
    const auto& y = b.arc(i);
    if (x.src != y.src || x.dst != y.dst || x.attr != y.attr) return false;
  }
  return true;
}

}  // namespace tpgm
