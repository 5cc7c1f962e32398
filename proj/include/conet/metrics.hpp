#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "conet/cooccur.hpp"
#include "conet/graph.hpp"

namespace conet {

enum class CentralityKind { degree, closeness, betweenness };

/// "dc", "cc", "bc".
std::string_view short_name(CentralityKind kind);
CentralityKind parse_centrality_kind(std::string_view text);
/// Comma-separated list of short names.
std::vector<CentralityKind> parse_centrality_kinds(std::string_view text);

/// Scores aligned with `nodes` (which follow the graph's node order).
struct CentralityVector {
  CentralityKind kind = CentralityKind::degree;
  WindowLabel label;
  std::vector<std::string> nodes;
  Eigen::VectorXd scores;

  /// Score of a node, or 0 for ids outside the graph.
  double value_or_zero(std::string_view id) const;
};

/// How nodes of degree < 2 enter the graph average clustering.
enum class LowDegreeRule {
  count_as_zero,
  exclude,
};

/// Fraction of connected neighbour pairs; 0 below degree 2.
double local_clustering(const Graph& g, NodeIndex v);
/// Throws std::out_of_range for ids outside the graph.
double local_clustering(const Graph& g, std::string_view id);

/// Unweighted node mean of local clustering. Throws std::invalid_argument on an
/// empty graph. Under `exclude`, a graph with no node of degree >= 2 has
/// average 0.
double average_clustering(const Graph& g, LowDegreeRule rule = LowDegreeRule::count_as_zero);

/// deg(v) / (n - 1); 0 when n = 1.
CentralityVector degree_centrality(const Graph& g, WindowLabel label = {});

/// Component-scaled closeness:
///   (r / (n - 1)) * (r / sum of distances to the r reachable nodes),
/// 0 for nodes that reach nobody.
CentralityVector closeness_centrality(const Graph& g, WindowLabel label = {});

/// Shortest-path betweenness over unordered endpoint pairs excluding v,
/// divided by (n - 1)(n - 2) / 2 when n >= 3.
CentralityVector betweenness_centrality(const Graph& g, WindowLabel label = {});

CentralityVector centrality(const Graph& g, CentralityKind kind, WindowLabel label = {});

struct TopologySummary {
  WindowLabel label;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double average_degree = 0.0;
  /// Unset for empty graphs.
  std::optional<double> average_clustering;
};

TopologySummary summarize(const CoOccurrenceGraph& g, LowDegreeRule rule = LowDegreeRule::count_as_zero);
std::vector<TopologySummary> topology_series(std::span<const CoOccurrenceGraph> graphs,
                                             LowDegreeRule rule = LowDegreeRule::count_as_zero);

}  // namespace conet
