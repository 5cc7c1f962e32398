#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "conet/calendar.hpp"

namespace conet {

/// One dining check-in.
struct CheckInRecord {
  std::string student;
  Seconds timestamp = 0;
  std::string location;

  friend auto operator<=>(const CheckInRecord&, const CheckInRecord&) = default;
};

/// Records sharing a location and a local day, sorted by timestamp.
struct LocationDay {
  std::string location;
  std::int64_t day = 0;
  std::vector<std::size_t> records;
};

/// Immutable set of check-ins bound to the calendar used to interpret them.
///
/// Records are held sorted by (timestamp, student, location), so every index
/// list below is sorted by timestamp as well. Exact duplicate triples are
/// collapsed on construction.
class EventLog {
 public:
  EventLog() = default;
  EventLog(std::vector<CheckInRecord> records, StudyCalendar calendar);

  const std::vector<CheckInRecord>& records() const { return records_; }
  const StudyCalendar& calendar() const { return calendar_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Number of duplicates dropped during construction.
  std::size_t duplicates_dropped() const { return duplicates_; }

  /// Sorted distinct student ids.
  const std::vector<std::string>& students() const { return students_; }
  /// Records of one student in time order (empty for unknown ids).
  std::vector<CheckInRecord> events_of(std::string_view student) const;
  /// Per-(location, day) buckets ordered by (location, day).
  const std::vector<LocationDay>& buckets() const { return buckets_; }

  /// New log holding the subset of records accepted by `keep`.
  template <typename Pred>
  EventLog filter(Pred keep) const {
    std::vector<CheckInRecord> out;
    for (const auto& r : records_) {
      if (keep(r)) out.push_back(r);
    }
    return EventLog(std::move(out), calendar_);
  }

 private:
  std::vector<CheckInRecord> records_;
  StudyCalendar calendar_;
  std::size_t duplicates_ = 0;
  std::vector<std::string> students_;
  std::vector<std::vector<std::size_t>> by_student_;
  std::vector<LocationDay> buckets_;
};

enum class IngestFormat {
  /// One file per student, rows of (timestamp, location); id from file stem.
  per_student,
  /// One file with (student, timestamp, location) rows.
  single_file,
};

IngestFormat parse_ingest_format(std::string_view text);

struct Rejection {
  std::string source;
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  /// Data lines seen (header and blank lines excluded).
  std::size_t input_lines = 0;
  std::size_t accepted = 0;
  /// Malformed, out-of-range and duplicate lines; accepted + rejected = input.
  std::vector<Rejection> rejected;
  std::size_t duplicates = 0;
};

struct ParsedLog {
  EventLog log;
  IngestReport report;
};

/// Parses one delimited stream. `source_name` labels rejections and, in
/// per-student format, supplies the student id.
ParsedLog parse_checkins(std::istream& in, IngestFormat format, const StudyCalendar& calendar,
                         const std::string& source_name);

/// Parses a file, or every regular file of a directory in name order.
/// Throws DataError when the path cannot be read.
ParsedLog parse_checkins(const std::filesystem::path& path, IngestFormat format,
                         const StudyCalendar& calendar);

/// Student id for a per-student file: the file stem ("u07.csv" -> "u07").
std::string student_id_from_path(const std::filesystem::path& path);

struct WeekSlice {
  int label = 0;
  int raw_week = 0;
  EventLog events;
};

struct WeekPartition {
  std::vector<WeekSlice> weeks;
  std::size_t excluded = 0;
  /// Records outside the calendar (before the start or after the end).
  std::size_t rejected = 0;
};

/// Splits a log into labelled weekly windows. Every labelled week of a bounded
/// calendar gets a slice, empty or not; unbounded calendars stop at the last
/// week holding an event.
WeekPartition partition_weeks(const EventLog& log);

/// Records whose raw week maps to a label in [from, to].
EventLog select_weeks(const EventLog& log, int from, int to);

void write_events(std::ostream& out, const EventLog& log);

}  // namespace conet
