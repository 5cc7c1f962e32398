#include "conet/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace conet {

Eigen::MatrixX2d LayoutResult::positions() const {
  Eigen::MatrixX2d xy(static_cast<Eigen::Index>(nodes.size()), 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    xy(r, 0) = nodes[i].radius * std::cos(nodes[i].angle);
    xy(r, 1) = nodes[i].radius * std::sin(nodes[i].angle);
  }
  return xy;
}

LayoutResult core_periphery_layout(const Graph& g, const CentralityVector& centrality,
                                   const std::map<std::string, double>& df_ranks) {
  if (g.empty()) throw std::invalid_argument("layout of an empty graph");
  if (centrality.nodes != g.nodes()) {
    throw std::invalid_argument("centrality domain differs from graph nodes");
  }
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  // Node indices follow id order, so index order breaks ties by id.
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return centrality.scores(static_cast<Eigen::Index>(a)) >
           centrality.scores(static_cast<Eigen::Index>(b));
  });

  LayoutResult out;
  out.nodes.resize(n);
  std::size_t i = 0;
  while (i < n) {
    const double score = centrality.scores(static_cast<Eigen::Index>(order[i]));
    std::size_t j = i + 1;
    while (j < n && centrality.scores(static_cast<Eigen::Index>(order[j])) == score) ++j;
    const double radius = static_cast<double>(j) / static_cast<double>(n);
    for (std::size_t k = i; k < j; ++k) {
      auto& node = out.nodes[k];
      node.id = g.name(order[k]);
      node.radius = radius;
      node.angle = std::fmod(static_cast<double>(k) * kGoldenAngle, 2.0 * std::numbers::pi);
      node.color_value = score;
      if (const auto it = df_ranks.find(node.id); it != df_ranks.end()) node.size_value = it->second;
    }
    i = j;
  }
  out.edges = g.sorted_edges();
  return out;
}

ScatterSeries scatter_series(const RegularizedSeries& centrality, const RegularizedSeries& df,
                             PValueMethod method) {
  std::vector<std::string> a = centrality.ids, b = df.ids;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw std::invalid_argument("scatter series over different id sets");

  std::map<std::string, double> y_of;
  for (std::size_t i = 0; i < df.ids.size(); ++i) y_of[df.ids[i]] = df.values(static_cast<Eigen::Index>(i));

  ScatterSeries out;
  for (std::size_t i = 0; i < centrality.ids.size(); ++i) {
    const auto& id = centrality.ids[i];
    out.points.push_back({id, centrality.values(static_cast<Eigen::Index>(i)), y_of.at(id)});
  }
  if (out.points.size() >= 3) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(out.points.size()));
    Eigen::VectorXd y(x.size());
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      x(static_cast<Eigen::Index>(i)) = out.points[i].x;
      y(static_cast<Eigen::Index>(i)) = out.points[i].y;
    }
    try {
      out.annotation = spearman_test(x, y, method);
    } catch (const std::domain_error&) {
    }
  }
  return out;
}

}  // namespace conet
