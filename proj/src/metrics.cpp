#include "conet/metrics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "conet/calendar.hpp"

namespace conet {

namespace {

CentralityVector make_vector(const Graph& g, CentralityKind kind, WindowLabel label) {
  return {kind, label, g.nodes(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.node_count()))};
}

std::size_t common_neighbors(std::span<const NodeIndex> a, std::span<const NodeIndex> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

/// Hop distances from `source`; -1 marks unreachable nodes.
std::vector<long> bfs_distances(const Graph& g, NodeIndex source) {
  std::vector<long> dist(g.node_count(), -1);
  std::deque<NodeIndex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::string_view short_name(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::degree: return "dc";
    case CentralityKind::closeness: return "cc";
    case CentralityKind::betweenness: return "bc";
  }
  return "?";
}

CentralityKind parse_centrality_kind(std::string_view text) {
  if (text == "dc" || text == "degree") return CentralityKind::degree;
  if (text == "cc" || text == "closeness") return CentralityKind::closeness;
  if (text == "bc" || text == "betweenness") return CentralityKind::betweenness;
  throw DataError("unknown centrality '" + std::string(text) + "'");
}

std::vector<CentralityKind> parse_centrality_kinds(std::string_view text) {
  std::vector<CentralityKind> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) out.push_back(parse_centrality_kind(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double CentralityVector::value_or_zero(std::string_view id) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return 0.0;
  return scores(it - nodes.begin());
}

double local_clustering(const Graph& g, NodeIndex v) {
  const auto k = g.degree(v);
  if (k < 2) return 0.0;
  const auto nbrs = g.neighbors(v);
  std::size_t links = 0;
  for (auto u : nbrs) links += common_neighbors(g.neighbors(u), nbrs);
  // Every neighbour-neighbour link was seen from both ends.
  return static_cast<double>(links) / static_cast<double>(k * (k - 1));
}

double local_clustering(const Graph& g, std::string_view id) {
  const auto v = g.index_of(id);
  if (!v) throw std::out_of_range("node '" + std::string(id) + "' not in graph");
  return local_clustering(g, *v);
}

double average_clustering(const Graph& g, LowDegreeRule rule) {
  if (g.empty()) throw std::invalid_argument("average clustering of an empty graph");
  double sum = 0.0;
  std::size_t counted = 0;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (rule == LowDegreeRule::exclude && g.degree(v) < 2) continue;
    sum += local_clustering(g, v);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

CentralityVector degree_centrality(const Graph& g, WindowLabel label) {
  auto out = make_vector(g, CentralityKind::degree, label);
  const auto n = g.node_count();
  if (n < 2) return out;
  for (NodeIndex v = 0; v < n; ++v) {
    out.scores(static_cast<Eigen::Index>(v)) =
        static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
  }
  return out;
}

CentralityVector closeness_centrality(const Graph& g, WindowLabel label) {
  auto out = make_vector(g, CentralityKind::closeness, label);
  const auto n = g.node_count();
  if (n < 2) return out;
  for (NodeIndex v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    long reach = -1;
    long total = 0;
    for (long d : dist) {
      if (d >= 0) {
        ++reach;
        total += d;
      }
    }
    if (reach <= 0) continue;
    const double r = static_cast<double>(reach);
    out.scores(static_cast<Eigen::Index>(v)) =
        (r / static_cast<double>(n - 1)) * (r / static_cast<double>(total));
  }
  return out;
}

CentralityVector betweenness_centrality(const Graph& g, WindowLabel label) {
  auto out = make_vector(g, CentralityKind::betweenness, label);
  const auto n = g.node_count();
  if (n < 3) return out;

  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::vector<NodeIndex>> preds(n);
  std::vector<NodeIndex> order;
  order.reserve(n);
  for (NodeIndex s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<NodeIndex> queue{s};
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) out.scores(static_cast<Eigen::Index>(w)) += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  const double pairs = static_cast<double>((n - 1) * (n - 2));
  out.scores /= pairs;
  return out;
}

CentralityVector centrality(const Graph& g, CentralityKind kind, WindowLabel label) {
  switch (kind) {
    case CentralityKind::degree: return degree_centrality(g, label);
    case CentralityKind::closeness: return closeness_centrality(g, label);
    case CentralityKind::betweenness: return betweenness_centrality(g, label);
  }
  throw std::invalid_argument("unknown centrality kind");
}

TopologySummary summarize(const CoOccurrenceGraph& g, LowDegreeRule rule) {
  TopologySummary s{g.label, g.graph.node_count(), g.graph.edge_count(), 0.0, std::nullopt};
  if (s.node_count > 0) {
    s.average_degree = 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(s.node_count);
    s.average_clustering = average_clustering(g.graph, rule);
  }
  return s;
}

std::vector<TopologySummary> topology_series(std::span<const CoOccurrenceGraph> graphs,
                                             LowDegreeRule rule) {
  std::vector<TopologySummary> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(summarize(g, rule));
  return out;
}

}  // namespace conet
