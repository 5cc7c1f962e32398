#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "conet/cooccur.hpp"
#include "conet/metrics.hpp"

namespace conet {

inline constexpr int kFlourishingMin = 8;
inline constexpr int kFlourishingMax = 56;

/// Two administrations of the flourishing scale.
struct TraitRecord {
  int f1 = kFlourishingMin;
  int f2 = kFlourishingMin;

  int df() const { return f2 - f1; }
};

enum class TraitField { f1, f2, df };

std::string_view short_name(TraitField field);

/// Per-student trait scores keyed by student id.
class TraitScores {
 public:
  /// Throws DataError for scores outside [8, 56] or a repeated id.
  void add(const std::string& student, int f1, int f2);

  const std::map<std::string, TraitRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool contains(std::string_view student) const;
  const TraitRecord& at(const std::string& student) const;
  std::vector<std::string> students() const;

  double value(const std::string& student, TraitField field) const;

  /// Delimited (comma or tab) rows of student, F1, F2 with an optional header.
  static TraitScores parse(std::istream& in, const std::string& source_name = "scores");
  static TraitScores load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

 private:
  std::map<std::string, TraitRecord> records_;
};

/// Fractional ranks (1-based; ties share the mean of their positions).
template <typename Derived>
Eigen::VectorXd rank_with_ties(const Eigen::MatrixBase<Derived>& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a) < values(b);
  });
  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && values(order[static_cast<std::size_t>(j)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    // Positions i..j-1 (0-based) share rank mean(i+1 .. j).
    const double shared = 0.5 * static_cast<double>(i + 1 + j);
    for (Eigen::Index k = i; k < j; ++k) ranks(order[static_cast<std::size_t>(k)]) = shared;
    i = j;
  }
  return ranks;
}

/// Pearson correlation. Throws std::invalid_argument for unequal lengths or
/// fewer than two points, std::domain_error for a constant series.
template <typename DerivedX, typename DerivedY>
double pearson(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation of series of unequal length");
  if (x.size() < 2) throw std::invalid_argument("correlation needs at least two points");
  const Eigen::ArrayXd dx = x.derived().template cast<double>().array() - x.derived().template cast<double>().mean();
  const Eigen::ArrayXd dy = y.derived().template cast<double>().array() - y.derived().template cast<double>().mean();
  const double sxx = (dx * dx).sum();
  const double syy = (dy * dy).sum();
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("correlation undefined for a constant series");
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// Pearson correlation of tie-averaged ranks. Needs n >= 3; throws
/// std::domain_error when either series is constant.
double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

enum class PValueMethod {
  /// Exact permutation for n <= 9, t approximation above.
  automatic,
  exact,
  t_approx,
  monte_carlo,
};

PValueMethod parse_pvalue_method(std::string_view text);

inline constexpr std::size_t kMaxExactN = 9;
inline constexpr std::size_t kDefaultMonteCarloDraws = 100000;

/// Two-sided p-value for a tie-free Spearman rho over n points. Exact mode
/// enumerates all n! rankings (n <= 9); Monte-Carlo mode samples `draws`
/// random rankings from `seed`.
double spearman_pvalue(double rho, std::size_t n, PValueMethod method = PValueMethod::automatic,
                       std::uint64_t seed = 0, std::size_t draws = kDefaultMonteCarloDraws);

struct SpearmanTest {
  double rho = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// rho with a p-value; permutation modes permute the observed (possibly tied)
/// ranks rather than 1..n.
SpearmanTest spearman_test(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           PValueMethod method = PValueMethod::automatic, std::uint64_t seed = 0,
                           std::size_t draws = kDefaultMonteCarloDraws);

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1, "" otherwise.
std::string significance_stars(double p);

/// Values z-scored with the population standard deviation.
struct RegularizedSeries {
  std::vector<std::string> ids;
  Eigen::VectorXd values;
};

/// (r - mean) / sd. Throws std::invalid_argument when sizes differ or n < 2,
/// std::domain_error when sd = 0.
RegularizedSeries zscore_regularize(std::vector<std::string> ids, const Eigen::Ref<const Eigen::VectorXd>& ranks);

/// Ranks then z-scores.
RegularizedSeries regularized_ranks(std::vector<std::string> ids, const Eigen::Ref<const Eigen::VectorXd>& values);

struct CorrelationResult {
  CentralityKind kind = CentralityKind::degree;
  int week = 0;
  TraitField field = TraitField::df;
  std::size_t n = 0;
  /// Unset when a series is constant.
  std::optional<double> rho;
  double p_value = std::nan("");
  std::string stars;
};

struct CorrelationTable {
  std::vector<int> weeks;
  std::vector<CentralityKind> kinds;
  std::vector<TraitField> fields{TraitField::f1, TraitField::f2, TraitField::df};
  /// Row-major by week, then kind, then field.
  std::vector<CorrelationResult> cells;

  const CorrelationResult& at(int week, CentralityKind kind, TraitField field) const;
};

/// Centrality of each roster student; ids outside the graph score 0.
Eigen::VectorXd roster_values(const CentralityVector& c, std::span<const std::string> roster);
Eigen::VectorXd roster_values(const TraitScores& scores, std::span<const std::string> roster,
                              TraitField field);

/// Roster students missing from a cumulative graph either score 0 or are
/// left out of that graph's cells.
enum class AbsentRule { zero, drop };

AbsentRule parse_absent_rule(std::string_view text);
std::string_view absent_rule_name(AbsentRule rule);

/// Roster students with `rule` applied: all of them for zero, those present
/// in `g` for drop.
std::vector<std::string> roster_for_graph(const Graph& g, std::span<const std::string> roster, AbsentRule rule);

struct CorrelationOptions {
  PValueMethod method = PValueMethod::automatic;
  std::uint64_t seed = 0;
  AbsentRule absent = AbsentRule::zero;
};

/// One cell per (cumulative graph, kind, trait field). Graph `to` labels give
/// the week axis. Throws std::invalid_argument for an empty roster and
/// DataError for roster students without scores.
CorrelationTable correlation_table(std::span<const CoOccurrenceGraph> cumulative,
                                   const TraitScores& scores, std::span<const std::string> roster,
                                   std::span<const CentralityKind> kinds,
                                   const CorrelationOptions& options = {});

/// Same, from precomputed roster-aligned centralities: `centralities[w][k]`
/// for week index w and kind index k, and roster-aligned trait columns.
/// NaN centralities are dropped from their cell.
CorrelationTable correlation_table(const std::vector<int>& weeks,
                                   std::span<const CentralityKind> kinds,
                                   const std::vector<std::vector<Eigen::VectorXd>>& centralities,
                                   const std::vector<Eigen::VectorXd>& traits,
                                   const CorrelationOptions& options = {});

}  // namespace conet
