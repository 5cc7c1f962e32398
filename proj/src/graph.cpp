#include "conet/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace conet {

Graph Graph::from_edges(std::span<const NamedEdge> edges) {
  std::set<std::string> ids;
  for (const auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop on node '" + u + "'");
    ids.insert(u);
    ids.insert(v);
  }
  std::vector<std::string> nodes(ids.begin(), ids.end());
  auto index = [&](const std::string& id) {
    return static_cast<NodeIndex>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::set<Edge> unique;
  for (const auto& [u, v] : edges) {
    const auto a = index(u), b = index(v);
    unique.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<Edge> list(unique.begin(), unique.end());
  return from_parts(std::move(nodes), list);
}

Graph Graph::from_parts(std::vector<std::string> nodes, std::span<const Edge> edges) {
  Graph g;
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("duplicate node id");
  }
  g.nodes_ = std::move(nodes);
  g.adjacency_.resize(g.nodes_.size());
  for (const auto& [a, b] : edges) {
    if (a >= g.nodes_.size() || b >= g.nodes_.size()) throw std::out_of_range("edge endpoint");
    if (a == b) throw std::invalid_argument("self-loop on node '" + g.nodes_[a] + "'");
    if (g.has_edge(a, b)) throw std::invalid_argument("parallel edge");
    g.link(a, b);
    g.edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  return g;
}

std::optional<NodeIndex> Graph::index_of(std::string_view id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

bool Graph::has_edge(NodeIndex a, NodeIndex b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

void Graph::link(NodeIndex a, NodeIndex b) {
  auto& x = adjacency_[a];
  x.insert(std::lower_bound(x.begin(), x.end(), b), b);
  auto& y = adjacency_[b];
  y.insert(std::lower_bound(y.begin(), y.end(), a), a);
}

void Graph::unlink(NodeIndex a, NodeIndex b) {
  auto& x = adjacency_[a];
  x.erase(std::lower_bound(x.begin(), x.end(), b));
  auto& y = adjacency_[b];
  y.erase(std::lower_bound(y.begin(), y.end(), a));
}

void Graph::replace_edge(std::size_t position, NodeIndex a, NodeIndex b) {
  auto& e = edges_.at(position);
  unlink(e.first, e.second);
  link(a, b);
  e = {std::min(a, b), std::max(a, b)};
}

std::vector<NamedEdge> Graph::sorted_edges() const {
  std::vector<NamedEdge> out;
  out.reserve(edges_.size());
  // Node order is lexicographic, so index order already gives u < v.
  for (const auto& [a, b] : edges_) out.emplace_back(nodes_[a], nodes_[b]);
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.nodes_ == b.nodes_ && a.sorted_edges() == b.sorted_edges();
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> out(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) out[v] = g.degree(v);
  return out;
}

}  // namespace conet
