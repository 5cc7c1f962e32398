#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conet {

/// Integer seconds since the Unix epoch.
using Seconds = std::int64_t;

inline constexpr Seconds kSecondsPerDay = 86400;
inline constexpr Seconds kDaysPerWeek = 7;
inline constexpr Seconds kDefaultTzOffset = -5 * 3600;

/// Input that is well-formed C++ but wrong as data (bad file, bad field).
/// The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CivilDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

/// Parses "YYYY-MM-DD". Throws DataError on anything else.
CivilDate parse_date(std::string_view text);
std::string format_date(const CivilDate& date);

/// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(const CivilDate& date);

/// Maps timestamps onto local days and 1-based raw weeks counted from a study
/// start date, and renumbers the non-excluded raw weeks densely as labels.
///
/// Local time is UTC plus a fixed offset. Weeks are half-open
/// [start + 7k days, start + 7(k+1) days). When `week_count` is unset the study
/// has no upper bound and labels are assigned on demand.
class StudyCalendar {
 public:
  StudyCalendar() = default;
  StudyCalendar(CivilDate start, Seconds tz_offset = kDefaultTzOffset,
                std::set<int> excluded_weeks = {},
                std::optional<int> week_count = std::nullopt);

  const CivilDate& start_date() const { return start_; }
  Seconds tz_offset() const { return tz_offset_; }
  const std::set<int>& excluded_weeks() const { return excluded_; }
  std::optional<int> week_count() const { return week_count_; }

  /// First instant (epoch seconds) of local day 0.
  Seconds study_start() const;
  /// One past the last instant of the study, when bounded.
  std::optional<Seconds> study_end() const;

  /// floor((t + tz_offset - midnight(start)) / 86400); negative before start.
  std::int64_t day_of(Seconds t) const;
  /// 1-based raw week; values < 1 lie before the study start.
  int raw_week_of(Seconds t) const;
  bool in_range(Seconds t) const;

  bool is_excluded(int raw_week) const { return excluded_.contains(raw_week); }
  /// Dense label for a raw week, or nullopt for excluded / out-of-range weeks.
  std::optional<int> label_of_raw(int raw_week) const;
  /// Inverse of label_of_raw. Throws std::out_of_range for labels < 1 or past
  /// the last labelled week of a bounded calendar.
  int raw_of_label(int label) const;
  /// Number of labels in a bounded calendar.
  std::optional<int> label_count() const;

 private:
  CivilDate start_{2013, 1, 6};
  Seconds tz_offset_ = kDefaultTzOffset;
  std::set<int> excluded_;
  std::optional<int> week_count_;
};

/// Parses "11", "3,11", "1-4,9" into a set of positive integers.
std::set<int> parse_int_list(std::string_view text);

}  // namespace conet
