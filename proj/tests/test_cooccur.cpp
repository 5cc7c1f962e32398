#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conet/cooccur.hpp"
#include "support/oracles.hpp"

using namespace conet;

namespace {

constexpr Seconds kJan6 = 1357430400;
const StudyCalendar kUtc({2013, 1, 6}, 0);

EventLog log_of(std::vector<CheckInRecord> recs, const StudyCalendar& cal = kUtc) {
  return EventLog(std::move(recs), cal);
}

CoOccurrenceGraph week_graph(std::vector<CheckInRecord> recs, Seconds t = kDefaultThreshold) {
  return build_window_graph(log_of(std::move(recs)), t, WindowLabel::week(1), true);
}

}  // namespace

TEST_CASE("gap equal to the threshold co-occurs") {
  const std::vector<CheckInRecord> u{{"u", kJan6 + 1000, "A"}};
  const std::vector<CheckInRecord> v{{"v", kJan6 + 1000 + 1200, "A"}};
  const auto w = cooccurs(u, v, 1200, kUtc);
  REQUIRE(w.has_value());
  CHECK(w->gap() == 1200);
  CHECK(w->location == "A");
  CHECK_FALSE(cooccurs(u, v, 1199, kUtc));
}

TEST_CASE("different locations never co-occur") {
  const std::vector<CheckInRecord> u{{"u", kJan6 + 5000, "A"}};
  const std::vector<CheckInRecord> v{{"v", kJan6 + 5000, "B"}};
  CHECK_FALSE(cooccurs(u, v, 1200, kUtc));
}

TEST_CASE("midnight splits a ten-minute gap") {
  const StudyCalendar cal({2013, 1, 6}, -5 * 3600);
  const Seconds local_midnight = cal.study_start() + 86400;
  const std::vector<CheckInRecord> u{{"u", local_midnight - 300, "A"}};
  const std::vector<CheckInRecord> v{{"v", local_midnight + 300, "A"}};
  CHECK_FALSE(cooccurs(u, v, 1200, cal));
  const std::vector<CheckInRecord> all{u[0], v[0]};
  CHECK(oracle::cooccurrence_edges(all, 1200, cal).empty());
}

TEST_CASE("a student cannot co-occur with themself") {
  const std::vector<CheckInRecord> u{{"u", kJan6, "A"}};
  CHECK_THROWS_AS(cooccurs(u, u, 1200, kUtc), std::invalid_argument);
}

TEST_CASE("the earliest qualifying pair is the witness") {
  const std::vector<CheckInRecord> u{{"u", kJan6 + 100, "B"}, {"u", kJan6 + 5000, "A"}, {"u", kJan6 + 9000, "A"}};
  const std::vector<CheckInRecord> v{{"v", kJan6 + 5100, "A"}, {"v", kJan6 + 9000, "A"}, {"v", kJan6 + 200, "B"}};
  std::vector<CheckInRecord> vs = v;
  std::sort(vs.begin(), vs.end(), [](auto& a, auto& b) { return a.timestamp < b.timestamp; });
  const auto w = cooccurs(u, vs, 1200, kUtc);
  REQUIRE(w);
  CHECK(w->location == "B");
  CHECK(w->t_u == kJan6 + 100);
  CHECK(w->t_v == kJan6 + 200);
  const auto back = cooccurs(vs, u, 1200, kUtc);
  REQUIRE(back);
  CHECK(back->t_u == kJan6 + 200);
}

TEST_CASE("three diners in one window form a triangle") {
  const auto g = week_graph({{"a", kJan6 + 100, "A"}, {"b", kJan6 + 400, "A"}, {"c", kJan6 + 900, "A"}});
  CHECK(g.graph.node_count() == 3);
  CHECK(g.graph.edge_count() == 3);
  CHECK(g.witnesses.size() == 3);
}

TEST_CASE("a lone diner is not a node") {
  const auto g = week_graph({{"u", kJan6 + 100, "A"}, {"v", kJan6 + 200, "A"}, {"w", kJan6 + 100, "B"}});
  CHECK(g.graph.nodes() == std::vector<std::string>{"u", "v"});
  CHECK(g.graph.edge_count() == 1);
}

TEST_CASE("empty slice gives an empty graph") {
  const auto g = week_graph({});
  CHECK(g.graph.empty());
  CHECK(g.graph.edge_count() == 0);
}

TEST_CASE("witness records are consistent with their edge") {
  const auto g = week_graph({{"a", kJan6 + 100, "A"}, {"b", kJan6 + 900, "A"}, {"c", kJan6 + 50000, "A"},
                             {"b", kJan6 + 50500, "A"}});
  const auto edges = g.graph.sorted_edges();
  REQUIRE(edges.size() == g.witnesses.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    CHECK(edges[i].first == g.witnesses[i].u);
    CHECK(edges[i].second == g.witnesses[i].v);
    CHECK(g.witnesses[i].gap() <= 1200);
    CHECK(kUtc.day_of(g.witnesses[i].t_u) == g.witnesses[i].day);
    CHECK(kUtc.day_of(g.witnesses[i].t_v) == g.witnesses[i].day);
  }
}

TEST_CASE("week graphs match the all-pairs oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Seconds t = std::uniform_int_distribution<Seconds>(0, 3000)(rng);
    const auto recs = oracle::random_records(rng, kUtc, 150, t);
    const auto g = week_graph(recs, t);
    CHECK(oracle::edge_set(g.graph) == oracle::cooccurrence_edges(recs, t, kUtc));
  }
}

TEST_CASE("property: cooccurs is symmetric") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto recs = oracle::random_records(rng, kUtc, 80, 1200);
    const auto log = log_of(recs);
    const auto& ids = log.students();
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const auto a = log.events_of(ids[i]);
        const auto b = log.events_of(ids[j]);
        const auto ab = cooccurs(a, b, 1200, kUtc);
        const auto ba = cooccurs(b, a, 1200, kUtc);
        REQUIRE(ab.has_value() == ba.has_value());
        if (ab) {
          CHECK(ab->t_u == ba->t_v);
          CHECK(ab->t_v == ba->t_u);
          CHECK(ab->location == ba->location);
        }
      }
  }
}

TEST_CASE("property: edges grow with the threshold") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto recs = oracle::random_records(rng, kUtc, 120, 1200);
    std::set<NamedEdge> previous;
    for (Seconds t : {0, 60, 300, 1199, 1200, 1201, 2400, 86400}) {
      const auto edges = oracle::edge_set(week_graph(recs, t).graph);
      CHECK(std::includes(edges.begin(), edges.end(), previous.begin(), previous.end()));
      previous = edges;
    }
  }
}

TEST_CASE("cumulative graphs") {
  std::mt19937_64 rng(14);
  const StudyCalendar cal({2013, 1, 6}, 0, {3}, 8);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<CheckInRecord> recs;
    for (int raw = 1; raw <= 8; ++raw) {
      for (auto r : oracle::random_records(rng, kUtc, 40, 1200)) {
        r.timestamp += (raw - 1) * 7 * kSecondsPerDay;
        recs.push_back(r);
      }
    }
    const EventLog log(recs, cal);
    const auto parts = partition_weeks(log);
    REQUIRE(parts.weeks.size() == 7);

    SUBCASE("single week equals the week graph") {
      for (int w = 1; w <= 7; ++w) {
        const auto c = build_cumulative_graph(log, w, w, 1200);
        CHECK(c.graph == build_week_graph(parts.weeks[w - 1], 1200).graph);
        CHECK(c.label == WindowLabel::range(w, w));
      }
    }
    SUBCASE("cumulative edges are the union of weekly edges and grow") {
      for (int from = 1; from <= 7; ++from) {
        std::set<NamedEdge> uni;
        std::set<std::string> prev_nodes;
        std::set<NamedEdge> prev_edges;
        for (int to = from; to <= 7; ++to) {
          const auto week = oracle::edge_set(build_week_graph(parts.weeks[to - 1], 1200).graph);
          uni.insert(week.begin(), week.end());
          const auto c = build_cumulative_graph(log, from, to, 1200);
          const auto edges = oracle::edge_set(c.graph);
          CHECK(edges == uni);
          const std::set<std::string> nodes(c.graph.nodes().begin(), c.graph.nodes().end());
          CHECK(std::includes(nodes.begin(), nodes.end(), prev_nodes.begin(), prev_nodes.end()));
          CHECK(std::includes(edges.begin(), edges.end(), prev_edges.begin(), prev_edges.end()));
          prev_nodes = nodes;
          prev_edges = edges;
        }
      }
    }
  }
}

TEST_CASE("invalid cumulative ranges") {
  const EventLog log({}, StudyCalendar({2013, 1, 6}, 0, {}, 5));
  CHECK_THROWS_AS(build_cumulative_graph(log, 3, 2, 1200), std::invalid_argument);
  CHECK_THROWS_AS(build_cumulative_graph(log, 0, 2, 1200), std::invalid_argument);
  CHECK_THROWS_AS(build_cumulative_graph(log, 1, 6, 1200), std::invalid_argument);
  CHECK(build_cumulative_graph(log, 1, 5, 1200).graph.empty());
}

TEST_CASE("window tags") {
  CHECK(WindowLabel::week(7).tag() == "week_07");
  CHECK(WindowLabel::range(11, 15).tag() == "cumulative_11_15");
}

TEST_CASE("mean dining count") {
  std::vector<CheckInRecord> recs;
  for (int i = 0; i < 7; ++i) recs.push_back({"a", kJan6 + i * 3600, "A"});
  const auto one = log_of(recs);
  const std::vector<std::string> a{"a"};
  CHECK(mean_dining_count(one, a, 1) == doctest::Approx(7.0));
  for (int i = 0; i < 3; ++i) recs.push_back({"a", kJan6 + 90000 + i, "A"});
  for (int i = 0; i < 4; ++i) recs.push_back({"b", kJan6 + 90000 + i, "A"});
  const std::vector<std::string> ab{"a", "b"};
  CHECK(mean_dining_count(log_of(recs), ab, 1) == doctest::Approx(7.0));
  CHECK_THROWS_AS(mean_dining_count(one, std::vector<std::string>{}, 1), std::invalid_argument);
  CHECK_THROWS_AS(mean_dining_count(one, a, 0), std::invalid_argument);
}
