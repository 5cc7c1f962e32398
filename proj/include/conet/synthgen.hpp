#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "conet/calendar.hpp"
#include "conet/graph.hpp"
#include "conet/ingest.hpp"
#include "conet/stats.hpp"

namespace conet {

/// Parameters of a synthetic dining cohort.
///
/// A planted tie graph is drawn first: a pair of core students is tied with
/// probability `p_core`, any other pair with `p_peri`. Each day every tie
/// shares a meal with probability `codine_rate`; the partner's check-in lands
/// within +/- threshold/2 of the initiator's. Remaining meals are eaten alone.
/// dF = slope * (co-dining partners in the analysis window - mean) + noise.
struct CohortSpec {
  int student_count = 30;
  int location_count = 20;
  int weeks = 20;
  CivilDate study_start{2013, 1, 6};
  Seconds tz_offset = kDefaultTzOffset;
  std::set<int> excluded_weeks;

  double core_fraction = 0.3;
  double p_core = 0.6;
  double p_peri = 0.1;
  double codine_rate = 0.1;
  double meals_per_student_per_week = 14.0;
  /// Local opening hours, seconds after midnight.
  Seconds open_time = 7 * 3600;
  Seconds close_time = 21 * 3600;
  Seconds threshold = 1200;
  /// Keep distinct meals at one venue more than 2*threshold apart so no
  /// co-occurrence arises by accident.
  bool isolate_meals = true;

  /// Analysis window in week labels; 0 means the second half of the study.
  int analysis_from = 0;
  int analysis_to = 0;
  double trait_slope = 1.0;
  double trait_noise_sd = 0.0;
  double f1_mean = 44.0;
  double f1_sd = 6.0;

  std::uint64_t seed = 1;

  /// Throws std::invalid_argument for an infeasible spec.
  void validate() const;
  StudyCalendar calendar() const;
  int resolved_analysis_from() const;
  int resolved_analysis_to() const;
};

struct GroundTruth {
  std::vector<std::string> students;
  std::set<std::string> core;
  /// Planted ties (u < v).
  std::vector<NamedEdge> ties;
  /// Week labels in which each tie actually shared a meal.
  std::map<NamedEdge, std::set<int>> codined_weeks;
  /// Distinct co-dining partners inside the analysis window.
  std::map<std::string, int> partner_count;
  int analysis_from = 0;
  int analysis_to = 0;

  /// Ties that co-dined in labels [from, to].
  std::vector<NamedEdge> codined_pairs(int from, int to) const;
};

struct Cohort {
  EventLog log;
  TraitScores scores;
  GroundTruth truth;
};

Cohort generate_cohort(const CohortSpec& spec);

/// JSON round trip for spec files.
CohortSpec load_cohort_spec(const std::filesystem::path& path);
CohortSpec cohort_spec_from_json(const std::string& text);
std::string cohort_spec_to_json(const CohortSpec& spec);

/// Writes events.tsv, scores.tsv and ground_truth.json into `dir`.
void write_cohort(const Cohort& cohort, const CohortSpec& spec, const std::filesystem::path& dir);

}  // namespace conet
