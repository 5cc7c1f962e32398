#include "conet/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "conet/calendar.hpp"

namespace conet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// Counts rankings whose |rho| reaches |observed| when `ry` is permuted against
/// fixed centred x ranks. `ry` must be sorted on entry; every distinct
/// arrangement of a multiset is equally likely, so distinct arrangements
/// suffice.
std::pair<std::size_t, std::size_t> enumerate_permutations(const Eigen::VectorXd& rx,
                                                           std::vector<double> ry,
                                                           double observed) {
  const Eigen::Index n = rx.size();
  const Eigen::ArrayXd dx = rx.array() - rx.mean();
  const double mean_y = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
  double syy = 0.0;
  for (double v : ry) syy += (v - mean_y) * (v - mean_y);
  const double norm = std::sqrt((dx * dx).sum() * syy);
  const double target = std::abs(observed) - 1e-12;
  std::size_t hits = 0, total = 0;
  do {
    double sxy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sxy += dx(i) * (ry[static_cast<std::size_t>(i)] - mean_y);
    if (std::abs(sxy / norm) >= target) ++hits;
    ++total;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return {hits, total};
}

double monte_carlo_p(const Eigen::VectorXd& rx, std::vector<double> ry, double observed,
                     std::uint64_t seed, std::size_t draws) {
  if (draws == 0) throw std::invalid_argument("Monte-Carlo p-value needs draws >= 1");
  const Eigen::Index n = rx.size();
  const Eigen::ArrayXd dx = rx.array() - rx.mean();
  const double mean_y = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
  double syy = 0.0;
  for (double v : ry) syy += (v - mean_y) * (v - mean_y);
  const double norm = std::sqrt((dx * dx).sum() * syy);
  const double target = std::abs(observed) - 1e-12;
  std::mt19937_64 rng(seed);
  std::size_t hits = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    std::shuffle(ry.begin(), ry.end(), rng);
    double sxy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) sxy += dx(i) * (ry[static_cast<std::size_t>(i)] - mean_y);
    if (std::abs(sxy / norm) >= target) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(draws + 1);
}

double t_approx_p(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

PValueMethod resolve(PValueMethod method, std::size_t n) {
  if (method == PValueMethod::automatic) {
    return n <= kMaxExactN ? PValueMethod::exact : PValueMethod::t_approx;
  }
  if (method == PValueMethod::exact && n > kMaxExactN) {
    throw std::invalid_argument("exact permutation p-value limited to n <= " +
                                std::to_string(kMaxExactN));
  }
  return method;
}

}  // namespace

std::string_view short_name(TraitField field) {
  switch (field) {
    case TraitField::f1: return "F1";
    case TraitField::f2: return "F2";
    case TraitField::df: return "dF";
  }
  return "?";
}

void TraitScores::add(const std::string& student, int f1, int f2) {
  auto in_scale = [](int v) { return v >= kFlourishingMin && v <= kFlourishingMax; };
  if (student.empty()) throw DataError("empty student id in trait scores");
  if (!in_scale(f1) || !in_scale(f2)) {
    throw DataError("flourishing score outside [8, 56] for '" + student + "'");
  }
  if (!records_.emplace(student, TraitRecord{f1, f2}).second) {
    throw DataError("repeated student '" + student + "' in trait scores");
  }
}

bool TraitScores::contains(std::string_view student) const {
  return records_.find(std::string(student)) != records_.end();
}

const TraitRecord& TraitScores::at(const std::string& student) const {
  const auto it = records_.find(student);
  if (it == records_.end()) throw DataError("no trait scores for '" + student + "'");
  return it->second;
}

std::vector<std::string> TraitScores::students() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& [id, rec] : records_) out.push_back(id);
  return out;
}

double TraitScores::value(const std::string& student, TraitField field) const {
  const auto& r = at(student);
  switch (field) {
    case TraitField::f1: return r.f1;
    case TraitField::f2: return r.f2;
    case TraitField::df: return r.df();
  }
  return 0.0;
}

TraitScores TraitScores::parse(std::istream& in, const std::string& source_name) {
  TraitScores out;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty()) continue;
    const char delim = view.find('\t') != std::string_view::npos ? '\t' : ',';
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      const auto next = view.find(delim, pos);
      fields.push_back(trim(view.substr(pos, next == std::string_view::npos ? next : next - pos)));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (fields.size() < 3) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": expected student, F1, F2");
    }
    const auto f1 = to_int(fields[1]);
    const auto f2 = to_int(fields[2]);
    if (!f1 || !f2) {
      if (first && !f1 && !f2) {
        first = false;
        continue;  // header
      }
      throw DataError(source_name + ":" + std::to_string(line_no) + ": non-integer score");
    }
    first = false;
    out.add(std::string(fields[0]), *f1, *f2);
  }
  return out;
}

TraitScores TraitScores::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scores file '" + path.string() + "'");
  return parse(in, path.string());
}

void TraitScores::write(std::ostream& out) const {
  out << "student\tF1\tF2\n";
  for (const auto& [id, r] : records_) out << id << '\t' << r.f1 << '\t' << r.f2 << '\n';
}

double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: series of unequal length");
  if (x.size() < 3) throw std::invalid_argument("spearman: needs n >= 3");
  return pearson(rank_with_ties(x), rank_with_ties(y));
}

PValueMethod parse_pvalue_method(std::string_view text) {
  if (text == "auto" || text == "automatic") return PValueMethod::automatic;
  if (text == "exact") return PValueMethod::exact;
  if (text == "t" || text == "t-approx" || text == "t_approx") return PValueMethod::t_approx;
  if (text == "monte-carlo" || text == "mc" || text == "monte_carlo") return PValueMethod::monte_carlo;
  throw DataError("unknown p-value method '" + std::string(text) + "'");
}

double spearman_pvalue(double rho, std::size_t n, PValueMethod method, std::uint64_t seed,
                       std::size_t draws) {
  if (n < 3) throw std::invalid_argument("spearman p-value needs n >= 3");
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("rho outside [-1, 1]");
  Eigen::VectorXd ranks = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 1.0, static_cast<double>(n));
  std::vector<double> ry(ranks.data(), ranks.data() + ranks.size());
  switch (resolve(method, n)) {
    case PValueMethod::exact: {
      const auto [hits, total] = enumerate_permutations(ranks, std::move(ry), rho);
      return static_cast<double>(hits) / static_cast<double>(total);
    }
    case PValueMethod::monte_carlo:
      return monte_carlo_p(ranks, std::move(ry), rho, seed, draws);
    default:
      return t_approx_p(rho, n);
  }
}

SpearmanTest spearman_test(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y, PValueMethod method,
                           std::uint64_t seed, std::size_t draws) {
  SpearmanTest out;
  out.n = static_cast<std::size_t>(x.size());
  out.rho = spearman_rho(x, y);
  const Eigen::VectorXd rx = rank_with_ties(x);
  const Eigen::VectorXd ryv = rank_with_ties(y);
  std::vector<double> ry(ryv.data(), ryv.data() + ryv.size());
  std::sort(ry.begin(), ry.end());
  switch (resolve(method, out.n)) {
    case PValueMethod::exact: {
      const auto [hits, total] = enumerate_permutations(rx, std::move(ry), out.rho);
      out.p = static_cast<double>(hits) / static_cast<double>(total);
      break;
    }
    case PValueMethod::monte_carlo:
      out.p = monte_carlo_p(rx, std::move(ry), out.rho, seed, draws);
      break;
    default:
      out.p = t_approx_p(out.rho, out.n);
  }
  return out;
}

std::string significance_stars(double p) {
  if (!(p == p)) return "";
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

RegularizedSeries zscore_regularize(std::vector<std::string> ids, const Eigen::Ref<const Eigen::VectorXd>& ranks) {
  if (static_cast<Eigen::Index>(ids.size()) != ranks.size()) {
    throw std::invalid_argument("z-score: ids and values differ in length");
  }
  if (ranks.size() < 2) throw std::invalid_argument("z-score needs n >= 2");
  const double mean = ranks.mean();
  const double sd = std::sqrt((ranks.array() - mean).square().mean());
  if (sd == 0.0) throw std::domain_error("z-score of a constant series");
  return {std::move(ids), (ranks.array() - mean) / sd};
}

RegularizedSeries regularized_ranks(std::vector<std::string> ids, const Eigen::Ref<const Eigen::VectorXd>& values) {
  return zscore_regularize(std::move(ids), rank_with_ties(values));
}

const CorrelationResult& CorrelationTable::at(int week, CentralityKind kind, TraitField field) const {
  for (const auto& c : cells) {
    if (c.week == week && c.kind == kind && c.field == field) return c;
  }
  throw std::out_of_range("no correlation cell for week " + std::to_string(week));
}

Eigen::VectorXd roster_values(const CentralityVector& c, std::span<const std::string> roster) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(roster.size()));
  for (std::size_t i = 0; i < roster.size(); ++i) out(static_cast<Eigen::Index>(i)) = c.value_or_zero(roster[i]);
  return out;
}

Eigen::VectorXd roster_values(const TraitScores& scores, std::span<const std::string> roster,
                              TraitField field) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(roster.size()));
  for (std::size_t i = 0; i < roster.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = scores.value(roster[i], field);
  }
  return out;
}

AbsentRule parse_absent_rule(std::string_view text) {
  if (text == "zero") return AbsentRule::zero;
  if (text == "drop") return AbsentRule::drop;
  throw DataError("absent rule must be zero|drop, got '" + std::string(text) + "'");
}

std::string_view absent_rule_name(AbsentRule rule) { return rule == AbsentRule::zero ? "zero" : "drop"; }

std::vector<std::string> roster_for_graph(const Graph& g, std::span<const std::string> roster, AbsentRule rule) {
  std::vector<std::string> out;
  for (const auto& s : roster) {
    if (rule == AbsentRule::zero || g.index_of(s)) out.push_back(s);
  }
  return out;
}

CorrelationTable correlation_table(std::span<const CoOccurrenceGraph> cumulative,
                                   const TraitScores& scores, std::span<const std::string> roster,
                                   std::span<const CentralityKind> kinds,
                                   const CorrelationOptions& options) {
  if (roster.empty()) throw std::invalid_argument("correlation table needs a non-empty roster");
  std::vector<int> weeks;
  std::vector<std::vector<Eigen::VectorXd>> cent;
  for (const auto& g : cumulative) {
    weeks.push_back(g.label.to);
    auto& row = cent.emplace_back();
    for (auto kind : kinds) {
      auto x = roster_values(centrality(g.graph, kind, g.label), roster);
      if (options.absent == AbsentRule::drop) {
        for (std::size_t i = 0; i < roster.size(); ++i) {
          if (!g.graph.index_of(roster[i])) x(static_cast<Eigen::Index>(i)) = std::nan("");
        }
      }
      row.push_back(std::move(x));
    }
  }
  std::vector<Eigen::VectorXd> traits;
  for (auto field : {TraitField::f1, TraitField::f2, TraitField::df}) {
    traits.push_back(roster_values(scores, roster, field));
  }
  return correlation_table(weeks, kinds, cent, traits, options);
}

CorrelationTable correlation_table(const std::vector<int>& weeks,
                                   std::span<const CentralityKind> kinds,
                                   const std::vector<std::vector<Eigen::VectorXd>>& centralities,
                                   const std::vector<Eigen::VectorXd>& traits,
                                   const CorrelationOptions& options) {
  CorrelationTable table;
  table.weeks = weeks;
  table.kinds.assign(kinds.begin(), kinds.end());
  if (traits.size() != table.fields.size()) throw std::invalid_argument("expected three trait columns");
  for (std::size_t w = 0; w < weeks.size(); ++w) {
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const auto& full = centralities.at(w).at(k);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < full.size(); ++i) {
        if (!std::isnan(full(i))) keep.push_back(i);
      }
      const Eigen::VectorXd x = full(keep);
      for (std::size_t f = 0; f < table.fields.size(); ++f) {
        CorrelationResult cell;
        cell.kind = kinds[k];
        cell.week = weeks[w];
        cell.field = table.fields[f];
        cell.n = keep.size();
        if (cell.n >= 3) {
          try {
            const Eigen::VectorXd y = traits[f](keep);
            const auto t = spearman_test(x, y, options.method, options.seed);
            cell.rho = t.rho;
            cell.p_value = t.p;
            cell.stars = significance_stars(t.p);
          } catch (const std::domain_error&) {
            // constant series: rho undefined
          }
        }
        table.cells.push_back(std::move(cell));
      }
    }
  }
  return table;
}

}  // namespace conet
