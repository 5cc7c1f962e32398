// Acceptance gate: one PASS/FAIL line per criterion. Criterion 8 runs only
// when CONET_STUDENTLIFE_INPUT (per-student check-in directory) and
// CONET_STUDENTLIFE_SCORES (student, F1, F2 table) are set.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "conet/cooccur.hpp"
#include "conet/metrics.hpp"
#include "conet/nullmodel.hpp"
#include "conet/stats.hpp"
#include "conet/synthgen.hpp"
#include "support/oracles.hpp"

using namespace conet;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  enum { pass, fail, skip } status = pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

bool is_simple(const Graph& g) {
  std::set<Edge> seen;
  for (auto [u, v] : g.edges()) {
    if (u == v || !seen.insert(std::minmax(u, v)).second) return false;
  }
  return true;
}

Outcome oracle_equivalence() {
  const StudyCalendar cal({2013, 1, 6});
  std::mt19937_64 rng(1001);
  std::size_t discrepancies = 0, records = 0;
  const auto start = Clock::now();
  for (int trial = 0; trial < 200; ++trial) {
    const Seconds t = std::uniform_int_distribution<Seconds>(0, 3600)(rng);
    auto recs = oracle::random_records(rng, cal, 200, t);
    records += recs.size();
    const auto expected = oracle::cooccurrence_edges(recs, t, cal);
    const auto parts = partition_weeks(EventLog(recs, cal));
    std::set<NamedEdge> got;
    for (const auto& w : parts.weeks) {
      const auto e = oracle::edge_set(build_week_graph(w, t).graph);
      got.insert(e.begin(), e.end());
    }
    std::vector<NamedEdge> diff;
    std::set_symmetric_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(diff));
    discrepancies += diff.size();
  }
  const double secs = seconds_since(start);
  return verdict(discrepancies == 0 && secs < 10.0,
                 fmt("200 logs, %zu records, %zu edge discrepancies, %.2f s", records, discrepancies, secs));
}

Outcome boundary_fixture() {
  const StudyCalendar cal({2013, 1, 6});
  const Seconds day0 = cal.study_start();
  std::size_t cases = 0, failures = 0;
  auto edge = [&](Seconds a, const char* la, Seconds b, const char* lb, Seconds t) {
    const EventLog log({{"u", a, la}, {"v", b, lb}}, cal);
    return build_window_graph(log, t, WindowLabel::week(1)).graph.edge_count() == 1;
  };
  auto expect = [&](bool got, bool want) {
    ++cases;
    failures += got != want ? 1 : 0;
  };
  const Seconds thresholds[] = {0, 1, 60, 600, 1200, 3600, 7200};
  // Start offsets within local day 1: just after midnight to just before the next.
  for (Seconds t : thresholds) {
    for (Seconds off = 0; off < kSecondsPerDay; off += 397) {
      const Seconds a = day0 + kSecondsPerDay + off;
      for (int dir : {1, -1}) {
        const Seconds at_t = a + dir * t, past_t = a + dir * (t + 1);
        const bool same_at = cal.day_of(at_t) == cal.day_of(a);
        const bool same_past = cal.day_of(past_t) == cal.day_of(a);
        expect(edge(a, "A", at_t, "A", t), same_at);
        expect(edge(a, "A", past_t, "A", t), false);
        if (!same_past) expect(edge(a, "A", past_t, "A", t + 2), false);
        expect(edge(a, "A", at_t, "B", t), false);
        expect(edge(a, "A", a, "B", t), false);
      }
    }
    // Straddling local midnight at every gap up to the threshold.
    const Seconds midnight = day0 + 2 * kSecondsPerDay;
    for (Seconds before = 1; before <= std::min<Seconds>(t, 50); ++before) {
      expect(edge(midnight - before, "A", midnight + (t - before), "A", t), false);
      expect(edge(midnight - before, "A", midnight - 1, "A", t), before - 1 <= t);
    }
  }
  return verdict(failures == 0, fmt("%zu boundary cases, %zu failures", cases, failures));
}

Outcome null_invariants() {
  std::mt19937_64 rng(1003);
  NullModelConfig cfg;
  cfg.master_seed = 13;
  std::size_t graphs = 0, violations = 0;
  while (graphs < 100) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 30)(rng);
    const auto g = oracle::random_graph(n, std::uniform_real_distribution<double>(0.05, 0.8)(rng), rng);
    if (g.edge_count() < 2) continue;
    ++graphs;
    for (std::uint64_t r = 0; r < 10; ++r) {
      const auto rep = generate_null(g, cfg, r).graph;
      const bool ok = rep.nodes() == g.nodes() && rep.edge_count() == g.edge_count() &&
                      degree_sequence(rep) == degree_sequence(g) && is_simple(rep);
      violations += ok ? 0 : 1;
    }
  }
  const auto k4 = Graph::from_edges(
      std::vector<NamedEdge>{{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
  bool fixed = true;
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto rep = generate_null(k4, cfg, r);
    fixed = fixed && rep.graph == k4 && rep.saturated;
  }
  return verdict(violations == 0 && fixed,
                 fmt("100 graphs x 10 replicates, %zu violations; K4 fixed point: %s", violations, fixed ? "yes" : "no"));
}

Outcome metric_oracles() {
  std::mt19937_64 rng(1004);
  std::size_t mismatches = 0;
  double worst = 0.0;
  auto compare = [&](double got, const oracle::Rational& want) {
    const double d = std::abs(got - oracle::to_double(want));
    worst = std::max(worst, d);
    mismatches += d <= 1e-9 ? 0 : 1;
  };
  constexpr int kInstances = 600;
  for (int trial = 0; trial < kInstances; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto g = oracle::random_graph(n, std::uniform_real_distribution<double>(0.05, 0.95)(rng), rng);
    compare(average_clustering(g), oracle::average_clustering(g));
    compare(average_clustering(g, LowDegreeRule::exclude), oracle::average_clustering(g, true));
    const auto cc = closeness_centrality(g);
    const auto bc = betweenness_centrality(g);
    const auto bo = oracle::betweenness(g);
    for (std::size_t v = 0; v < n; ++v) {
      compare(cc.scores(static_cast<Eigen::Index>(v)), oracle::closeness(g, v));
      compare(bc.scores(static_cast<Eigen::Index>(v)), bo[v]);
    }
  }
  return verdict(mismatches == 0,
                 fmt("%d graphs (n <= 8), %zu mismatches, max abs error %.3g", kInstances, mismatches, worst));
}

Outcome spearman_correctness() {
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  std::size_t tied_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 40)(rng);
    std::uniform_int_distribution<int> level(0, std::max(1, n / 3));
    Eigen::VectorXd x(n), y(n);
    std::vector<double> xs(n), ys(n);
    bool tied = false;
    do {
      for (int i = 0; i < n; ++i) {
        xs[i] = x(i) = level(rng);
        ys[i] = y(i) = level(rng) + 0.5 * xs[i];
      }
      tied = std::set<double>(xs.begin(), xs.end()).size() < xs.size();
    } while (std::set<double>(xs.begin(), xs.end()).size() < 2 || std::set<double>(ys.begin(), ys.end()).size() < 2);
    tied_pairs += tied ? 1 : 0;
    worst = std::max(worst, std::abs(spearman_rho(x, y) - oracle::spearman(xs, ys)));
  }
  const Eigen::VectorXd five = Eigen::VectorXd::LinSpaced(5, 1, 5);
  const double p5 = spearman_test(five, five, PValueMethod::exact).p;
  const bool p_ok = p5 == 2.0 / 120.0;

  bool invariant = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 30)(rng);
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = std::uniform_int_distribution<int>(-5, 5)(rng);
      y(i) = std::uniform_int_distribution<int>(-5, 5)(rng);
    }
    if (x.minCoeff() == x.maxCoeff() || y.minCoeff() == y.maxCoeff()) continue;
    // Scalar std::exp: Eigen's packet exp can round equal inputs differently.
    const Eigen::VectorXd fx = x.unaryExpr([](double v) { return 3.0 * std::exp(v) + 7.0; });
    const Eigen::VectorXd gy = y.array().cube();
    invariant = invariant && spearman_rho(fx, gy) == spearman_rho(x, y);
  }
  return verdict(worst <= 1e-12 && p_ok && invariant,
                 fmt("1000 pairs (%zu tied), max |rho - oracle| %.3g; p(n=5, rho=1) = %.17g; transform invariance %s",
                     tied_pairs, worst, p5, invariant ? "exact" : "broken"));
}

/// Cumulative graphs from `from` through each later week.
std::vector<CoOccurrenceGraph> cumulative_series(const EventLog& log, int from, int to, Seconds threshold) {
  std::vector<CoOccurrenceGraph> out;
  for (int w = from; w <= to; ++w) out.push_back(build_cumulative_graph(log, from, w, threshold));
  return out;
}

Outcome calibration() {
  const CohortSpec spec;
  const auto cohort = generate_cohort(spec);
  const auto roster = cohort.scores.students();
  const auto graphs = cumulative_series(cohort.log, spec.resolved_analysis_from(), spec.resolved_analysis_to(),
                                        spec.threshold);
  const std::vector<CentralityKind> kinds{CentralityKind::degree, CentralityKind::closeness,
                                          CentralityKind::betweenness};
  std::vector<int> weeks;
  std::vector<std::vector<Eigen::VectorXd>> cent;
  for (const auto& g : graphs) {
    weeks.push_back(g.label.to);
    auto& row = cent.emplace_back();
    for (auto k : kinds) row.push_back(roster_values(centrality(g.graph, k), roster));
  }
  std::vector<TraitRecord> pool;
  for (const auto& s : roster) pool.push_back(cohort.scores.at(s));

  std::mt19937_64 rng(1006);
  std::size_t cells = 0, significant = 0;
  for (int shuffle = 0; shuffle < 1000; ++shuffle) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Eigen::VectorXd> traits(3, Eigen::VectorXd(static_cast<Eigen::Index>(roster.size())));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      traits[0](idx) = pool[i].f1;
      traits[1](idx) = pool[i].f2;
      traits[2](idx) = pool[i].df();
    }
    const auto table = correlation_table(weeks, kinds, cent, traits);
    for (const auto& c : table.cells) {
      if (!c.rho) continue;
      ++cells;
      significant += c.p_value < 0.05 ? 1 : 0;
    }
  }
  const double fraction = static_cast<double>(significant) / static_cast<double>(cells);
  return verdict(fraction >= 0.03 && fraction <= 0.07,
                 fmt("1000 shuffles, %zu cells, fraction p < 0.05 = %.4f (target [0.03, 0.07])", cells, fraction));
}

Outcome planted_signal() {
  const auto start = Clock::now();
  const CohortSpec spec;  // zero noise
  const auto cohort = generate_cohort(spec);
  const auto roster = cohort.scores.students();
  const auto graphs = cumulative_series(cohort.log, spec.resolved_analysis_from(), spec.resolved_analysis_to(),
                                        spec.threshold);
  const std::vector<CentralityKind> kinds{CentralityKind::degree};
  const auto table = correlation_table(graphs, cohort.scores, roster, kinds);
  std::vector<double> trajectory;
  std::string path;
  for (int w : table.weeks) {
    const auto& c = table.at(w, CentralityKind::degree, TraitField::df);
    trajectory.push_back(c.rho.value_or(0.0));
    path += fmt("%s%.3f", path.empty() ? "" : " ", trajectory.back());
  }
  const auto& last = table.at(table.weeks.back(), CentralityKind::degree, TraitField::df);
  const double rho = last.rho.value_or(0.0);
  const double tau = oracle::kendall_tau_vs_index(trajectory);
  const double secs = seconds_since(start);
  return verdict(rho >= 0.9 && last.p_value < 0.01 && tau >= 0.5 && secs < 60.0,
                 fmt("final rho %.3f, p %.3g, Kendall tau-b %.3f, %.2f s; trajectory %s", rho, last.p_value, tau, secs,
                     path.c_str()));
}

Outcome studentlife() {
  const char* input = std::getenv("CONET_STUDENTLIFE_INPUT");
  const char* scores_path = std::getenv("CONET_STUDENTLIFE_SCORES");
  if (!input || !scores_path) return {Outcome::skip, "set CONET_STUDENTLIFE_INPUT and CONET_STUDENTLIFE_SCORES"};
  CivilDate start{2013, 1, 6};
  if (const char* s = std::getenv("CONET_STUDENTLIFE_START")) start = parse_date(s);
  const StudyCalendar cal(start);
  const auto parsed = parse_checkins(std::filesystem::path(input), IngestFormat::per_student, cal);
  const auto parts = partition_weeks(parsed.log);
  std::vector<CoOccurrenceGraph> weekly;
  for (const auto& w : parts.weeks) weekly.push_back(build_week_graph(w, kDefaultThreshold));
  const auto topo = topology_series(weekly);
  if (topo.size() < 20) return verdict(false, fmt("only %zu weeks in the supplied data", topo.size()));

  std::size_t peak_nodes = 0, peak_edges = 0;
  int peak_nodes_week = 0, peak_edges_week = 0;
  double first_half = 0.0, second_half = 0.0;
  for (const auto& t : topo) {
    if (t.node_count > peak_nodes) peak_nodes = t.node_count, peak_nodes_week = t.label.from;
    if (t.edge_count > peak_edges) peak_edges = t.edge_count, peak_edges_week = t.label.from;
    if (t.label.from <= 10) first_half += t.average_degree / 10.0;
    else if (t.label.from <= 20) second_half += t.average_degree / 10.0;
  }
  const double c13 = average_clustering(weekly[12].graph);
  const double c13x = average_clustering(weekly[12].graph, LowDegreeRule::exclude);
  const bool topo_ok = peak_nodes == 29 && peak_edges == 228 && peak_nodes_week == 13 && peak_edges_week == 13 &&
                       std::abs(first_half - 7.47) <= 0.3 && std::abs(second_half - 9.70) <= 0.3 &&
                       (std::abs(c13 - 0.776) <= 0.02 || std::abs(c13x - 0.776) <= 0.02);

  const auto scores = TraitScores::load(scores_path);
  const auto roster = scores.students();
  const auto graphs = cumulative_series(parsed.log, 11, 20, kDefaultThreshold);
  const std::vector<CentralityKind> kinds{CentralityKind::degree};
  const auto table = correlation_table(graphs, scores, roster, kinds);
  bool pattern = true;
  std::string stars;
  for (int w = 11; w <= 20; ++w) {
    const auto& c = table.at(w, CentralityKind::degree, TraitField::df);
    pattern = pattern && c.rho && *c.rho > 0.0 && (w <= 12 ? c.stars.empty() : !c.stars.empty());
    stars += fmt(" %d:%s", w, c.stars.empty() ? "-" : c.stars.c_str());
  }
  const double rho20 = table.at(20, CentralityKind::degree, TraitField::df).rho.value_or(0.0);
  pattern = pattern && std::abs(rho20 - 0.491) <= 0.02;
  return verdict(topo_ok && pattern,
                 fmt("peaks nodes %zu@%d edges %zu@%d; avg degree %.2f -> %.2f; week-13 clustering %.3f/%.3f; "
                     "week-20 rho %.3f; stars%s",
                     peak_nodes, peak_nodes_week, peak_edges, peak_edges_week, first_half, second_half, c13, c13x,
                     rho20, stars.c_str()));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 co-occurrence oracle equivalence", oracle_equivalence},
      {"2 threshold and day boundaries", boundary_fixture},
      {"3 null-model invariants", null_invariants},
      {"4 metric oracles", metric_oracles},
      {"5 Spearman correctness", spearman_correctness},
      {"6 calibration under shuffled traits", calibration},
      {"7 planted-signal recovery", planted_signal},
      {"8 StudentLife replication", studentlife},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::pass ? "PASS" : o.status == Outcome::fail ? "FAIL" : "SKIP";
    failed += o.status == Outcome::fail ? 1 : 0;
    std::printf("%s criterion %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
