#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conet/graph.hpp"
#include "conet/metrics.hpp"
#include "conet/stats.hpp"

namespace conet {

/// 2*pi*(1 - 1/phi).
inline constexpr double kGoldenAngle = 2.399963229728653;

struct LayoutNode {
  std::string id;
  /// Ring radius in (0, 1]; smaller is more central.
  double radius = 1.0;
  double angle = 0.0;
  double color_value = 0.0;
  /// Rank of the node's dF among scored nodes; unset when it has no score.
  std::optional<double> size_value;
};

struct LayoutResult {
  /// In placement order (descending centrality, ties by ascending id).
  std::vector<LayoutNode> nodes;
  std::vector<NamedEdge> edges;

  /// Cartesian positions, one row per node in `nodes` order.
  Eigen::MatrixX2d positions() const;
};

/// Radial core-periphery placement. Nodes are ranked by descending
/// centrality; a tie group shares the ring of its last position, so
/// radius = (position of the group's last member) / n. Angles advance by the
/// golden angle in placement order. `df_ranks` maps ids to size values.
/// Throws std::invalid_argument for an empty graph or a centrality vector
/// whose domain differs from the graph's nodes.
LayoutResult core_periphery_layout(const Graph& g, const CentralityVector& centrality,
                                   const std::map<std::string, double>& df_ranks);

struct ScatterPoint {
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

struct ScatterSeries {
  std::vector<ScatterPoint> points;
  /// Spearman of the points; unset below three points or for constant data.
  std::optional<SpearmanTest> annotation;
};

/// Pairs regularized centrality (x) with regularized dF (y) by id. Throws
/// std::invalid_argument when the id sets differ.
ScatterSeries scatter_series(const RegularizedSeries& centrality, const RegularizedSeries& df,
                             PValueMethod method = PValueMethod::automatic);

}  // namespace conet
