#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conet/metrics.hpp"
#include "conet/stats.hpp"
#include "support/oracles.hpp"

using namespace conet;

namespace {

Graph make(std::initializer_list<std::pair<const char*, const char*>> edges) {
  std::vector<NamedEdge> e;
  for (auto [u, v] : edges) e.emplace_back(u, v);
  return Graph::from_edges(e);
}

Graph complete(int n) {
  std::vector<NamedEdge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(oracle::node_name(i), oracle::node_name(j));
  return Graph::from_edges(e);
}

Graph star(int leaves) {
  std::vector<NamedEdge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back("c", "l" + std::to_string(i));
  return Graph::from_edges(e);
}

Graph cycle(int n) {
  std::vector<NamedEdge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(oracle::node_name(i), oracle::node_name((i + 1) % n));
  return Graph::from_edges(e);
}

double score(const CentralityVector& c, const Graph& g, const std::string& id) {
  return c.scores(static_cast<Eigen::Index>(*g.index_of(id)));
}

/// Same graph with node ids rewritten through `perm`.
Graph relabel(const Graph& g, const std::vector<std::size_t>& perm) {
  std::vector<NamedEdge> e;
  for (const auto& [u, v] : g.edges()) e.emplace_back(oracle::node_name(perm[u]), oracle::node_name(perm[v]));
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < g.node_count(); ++i) nodes.push_back(oracle::node_name(i));
  std::vector<Edge> idx;
  for (const auto& [a, b] : e) idx.emplace_back(std::stoul(a.substr(1)), std::stoul(b.substr(1)));
  return Graph::from_parts(nodes, idx);
}

}  // namespace

TEST_CASE("graph construction") {
  const auto g = make({{"b", "a"}, {"a", "b"}, {"c", "b"}});
  CHECK(g.nodes() == std::vector<std::string>{"a", "b", "c"});
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(degree_sequence(g) == std::vector<std::size_t>{1, 2, 1});
  CHECK_THROWS_AS(make({{"a", "a"}}), std::invalid_argument);
  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(Graph::from_parts({"a", "b"}, dup), std::invalid_argument);
  const Eigen::MatrixXd a = adjacency_matrix(g);
  CHECK(a.sum() == 4.0);
  CHECK(a == a.transpose());
}

TEST_CASE("local clustering examples") {
  const auto tri = make({{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK(local_clustering(tri, "a") == 1.0);
  const auto path = make({{"a", "b"}, {"b", "c"}});
  CHECK(local_clustering(path, "b") == 0.0);
  CHECK(local_clustering(path, "a") == 0.0);
  CHECK_THROWS_AS(local_clustering(path, "z"), std::out_of_range);
}

TEST_CASE("average clustering examples") {
  CHECK(average_clustering(complete(4)) == 1.0);
  CHECK(average_clustering(star(3)) == 0.0);
  CHECK_THROWS_AS(average_clustering(Graph{}), std::invalid_argument);
  // Triangle with a pendant: c = (1 + 1 + 1/3 + 0) / 4, or 7/9 over degree >= 2.
  const auto g = make({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}});
  CHECK(average_clustering(g) == doctest::Approx(7.0 / 12.0));
  CHECK(average_clustering(g, LowDegreeRule::exclude) == doctest::Approx(7.0 / 9.0));
  CHECK(average_clustering(make({{"a", "b"}}), LowDegreeRule::exclude) == 0.0);
}

TEST_CASE("degree centrality examples") {
  const auto s = star(4);
  const auto dc = degree_centrality(s);
  CHECK(score(dc, s, "c") == 1.0);
  CHECK(score(dc, s, "l1") == 0.25);
  const auto c6 = degree_centrality(cycle(6));
  CHECK(c6.scores.maxCoeff() == c6.scores.minCoeff());
  const auto single = Graph::from_parts({"a"}, {});
  CHECK(degree_centrality(single).scores(0) == 0.0);
}

TEST_CASE("closeness examples") {
  const auto p3 = make({{"a", "b"}, {"b", "c"}});
  const auto cc = closeness_centrality(p3);
  CHECK(score(cc, p3, "b") == doctest::Approx(1.0));
  CHECK(score(cc, p3, "a") == doctest::Approx(2.0 / 3.0));
  const auto k5 = closeness_centrality(complete(5));
  for (Eigen::Index i = 0; i < k5.scores.size(); ++i) CHECK(k5.scores(i) == doctest::Approx(1.0));
  const auto pairs = make({{"a", "b"}, {"c", "d"}});
  const auto cd = closeness_centrality(pairs);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(cd.scores(i) == doctest::Approx(1.0 / 3.0));
  const auto lone = Graph::from_parts({"a", "b", "c"}, std::vector<Edge>{{0, 1}});
  CHECK(closeness_centrality(lone).scores(2) == 0.0);
}

TEST_CASE("betweenness examples") {
  const auto p3 = make({{"a", "b"}, {"b", "c"}});
  const auto bc = betweenness_centrality(p3);
  CHECK(score(bc, p3, "b") == doctest::Approx(1.0));
  CHECK(score(bc, p3, "a") == 0.0);
  const auto k5 = betweenness_centrality(complete(5));
  CHECK(k5.scores.cwiseAbs().maxCoeff() == 0.0);
  CHECK(betweenness_centrality(make({{"a", "b"}})).scores.maxCoeff() == 0.0);
  // Centre of S5 lies on all 6 leaf pairs.
  const auto s = star(4);
  CHECK(score(betweenness_centrality(s), s, "c") == doctest::Approx(1.0));
}

TEST_CASE("metrics match exhaustive oracles on small graphs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const auto g = oracle::random_graph(n, p, rng);
    CHECK(average_clustering(g) == doctest::Approx(oracle::to_double(oracle::average_clustering(g))).epsilon(1e-12));
    CHECK(average_clustering(g, LowDegreeRule::exclude) ==
          doctest::Approx(oracle::to_double(oracle::average_clustering(g, true))).epsilon(1e-12));
    const auto cc = closeness_centrality(g);
    const auto bc = betweenness_centrality(g);
    const auto bo = oracle::betweenness(g);
    for (std::size_t v = 0; v < n; ++v) {
      CHECK(std::abs(cc.scores(static_cast<Eigen::Index>(v)) - oracle::to_double(oracle::closeness(g, v))) < 1e-9);
      CHECK(std::abs(bc.scores(static_cast<Eigen::Index>(v)) - oracle::to_double(bo[v])) < 1e-9);
      CHECK(local_clustering(g, v) == doctest::Approx(oracle::to_double(oracle::local_clustering(g, v))));
    }
  }
}

TEST_CASE("property: centralities are permutation equivariant") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    const auto g = oracle::random_graph(n, 0.35, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h = relabel(g, perm);
    for (auto kind : {CentralityKind::degree, CentralityKind::closeness, CentralityKind::betweenness}) {
      const auto a = centrality(g, kind);
      const auto b = centrality(h, kind);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(a.scores(static_cast<Eigen::Index>(v)) ==
              doctest::Approx(b.scores(static_cast<Eigen::Index>(perm[v]))).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("property: adding an edge never lowers endpoint degree centrality") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
    const auto g = oracle::random_graph(n, 0.3, rng);
    std::vector<Edge> missing;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!g.has_edge(i, j)) missing.emplace_back(i, j);
    if (missing.empty()) continue;
    const auto add = missing[std::uniform_int_distribution<std::size_t>(0, missing.size() - 1)(rng)];
    auto edges = g.edges();
    edges.push_back(add);
    const auto h = Graph::from_parts(g.nodes(), edges);
    const auto before = degree_centrality(g);
    const auto after = degree_centrality(h);
    CHECK(after.scores(static_cast<Eigen::Index>(add.first)) >= before.scores(static_cast<Eigen::Index>(add.first)));
    CHECK(after.scores(static_cast<Eigen::Index>(add.second)) >= before.scores(static_cast<Eigen::Index>(add.second)));
  }
}

TEST_CASE("property: vertex-transitive graphs score uniformly") {
  for (const auto& g : {cycle(5), cycle(8), complete(6)}) {
    for (auto kind : {CentralityKind::degree, CentralityKind::closeness, CentralityKind::betweenness}) {
      const auto c = centrality(g, kind);
      CHECK(c.scores.maxCoeff() - c.scores.minCoeff() < 1e-12);
    }
  }
}

TEST_CASE("degree centrality ranks equal raw degree ranks") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(15, 0.3, rng);
    const auto dc = degree_centrality(g);
    Eigen::VectorXd raw(static_cast<Eigen::Index>(g.node_count()));
    for (std::size_t v = 0; v < g.node_count(); ++v) raw(static_cast<Eigen::Index>(v)) = static_cast<double>(g.degree(v));
    CHECK(rank_with_ties(dc.scores) == rank_with_ties(raw));
  }
}

TEST_CASE("scores stay in range") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(10, 0.3, rng);
    const auto dc = degree_centrality(g);
    CHECK(dc.scores.minCoeff() >= 0.0);
    CHECK(dc.scores.maxCoeff() <= 1.0);
    CHECK(closeness_centrality(g).scores.minCoeff() >= 0.0);
    CHECK(betweenness_centrality(g).scores.minCoeff() >= 0.0);
  }
}

TEST_CASE("topology series") {
  CoOccurrenceGraph tri{WindowLabel::week(1), 1200, make({{"a", "b"}, {"b", "c"}, {"a", "c"}}), {}};
  CoOccurrenceGraph empty{WindowLabel::week(2), 1200, Graph{}, {}};
  const std::vector<CoOccurrenceGraph> gs{tri, empty};
  const auto series = topology_series(gs);
  REQUIRE(series.size() == 2);
  CHECK(series[0].node_count == 3);
  CHECK(series[0].edge_count == 3);
  CHECK(series[0].average_degree == 2.0);
  CHECK(series[0].average_clustering == 1.0);
  CHECK(series[1].node_count == 0);
  CHECK(series[1].average_degree == 0.0);
  CHECK_FALSE(series[1].average_clustering.has_value());
  CHECK(series[1].label == WindowLabel::week(2));
}

TEST_CASE("centrality names") {
  CHECK(parse_centrality_kind("dc") == CentralityKind::degree);
  CHECK(parse_centrality_kinds("bc,cc") ==
        std::vector<CentralityKind>{CentralityKind::betweenness, CentralityKind::closeness});
  CHECK(short_name(CentralityKind::closeness) == "cc");
  CHECK_THROWS_AS(parse_centrality_kind("pagerank"), DataError);
  const auto g = make({{"a", "b"}});
  const auto dc = degree_centrality(g);
  CHECK(dc.value_or_zero("a") == 1.0);
  CHECK(dc.value_or_zero("zz") == 0.0);
}
