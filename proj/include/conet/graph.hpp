#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace conet {

using NodeIndex = std::size_t;
using Edge = std::pair<NodeIndex, NodeIndex>;
using NamedEdge = std::pair<std::string, std::string>;

/// Undirected simple graph over string-labelled nodes.
///
/// Nodes are kept in lexicographic order of their ids, so a node index is a
/// stable function of the node set. Edges are stored with the smaller index
/// first. A graph only grows nodes through edges, so it never holds isolated
/// vertices unless built with `from_parts`.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list; repeated pairs collapse. Throws
  /// std::invalid_argument on a self-loop.
  static Graph from_edges(std::span<const NamedEdge> edges);
  /// Builds with an explicit node set (which may include isolated nodes).
  static Graph from_parts(std::vector<std::string> nodes, std::span<const Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(NodeIndex v) const { return nodes_.at(v); }
  std::optional<NodeIndex> index_of(std::string_view id) const;

  std::span<const NodeIndex> neighbors(NodeIndex v) const { return adjacency_.at(v); }
  std::size_t degree(NodeIndex v) const { return adjacency_.at(v).size(); }
  bool has_edge(NodeIndex a, NodeIndex b) const;

  /// Edges in storage order; `replace_edge` keeps positions stable.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Rewires edge `position` to (a, b). Caller guarantees simplicity.
  void replace_edge(std::size_t position, NodeIndex a, NodeIndex b);

  /// Edge names with u < v, sorted lexicographically.
  std::vector<NamedEdge> sorted_edges() const;

  /// Same node ids and same edge set.
  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void link(NodeIndex a, NodeIndex b);
  void unlink(NodeIndex a, NodeIndex b);

  std::vector<std::string> nodes_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<Edge> edges_;
};

std::vector<std::size_t> degree_sequence(const Graph& g);

/// Dense symmetric 0/1 adjacency matrix.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (const auto& [u, v] : g.edges()) {
    a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = Scalar(1);
    a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = Scalar(1);
  }
  return a;
}

}  // namespace conet
