#include "conet/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>

namespace conet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(delim, pos);
    out.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Integer seconds; a fractional part is dropped ("12.9" -> 12).
std::optional<Seconds> parse_timestamp(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  if (dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.empty() || !std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
  }
  if (!whole.empty() && whole.front() == '+') whole.remove_prefix(1);
  Seconds value = 0;
  const auto* end = whole.data() + whole.size();
  auto [ptr, ec] = std::from_chars(whole.data(), end, value);
  if (ec != std::errc{} || ptr != end || whole.empty()) return std::nullopt;
  return value;
}

struct Columns {
  std::optional<std::size_t> student;
  std::size_t timestamp = 0;
  std::size_t location = 1;
  std::size_t required = 2;
};

std::optional<Columns> columns_from_header(const std::vector<std::string_view>& fields,
                                           IngestFormat format) {
  static const std::array<std::string_view, 6> student_names{"student", "student_id", "uid",
                                                             "user", "user_id", "id"};
  static const std::array<std::string_view, 4> time_names{"timestamp", "time", "ts", "epoch"};
  static const std::array<std::string_view, 4> loc_names{"location", "location_id", "venue",
                                                         "place"};
  std::optional<std::size_t> s, t, l;
  auto in = [](const auto& names, const std::string& f) {
    return std::find(names.begin(), names.end(), f) != names.end();
  };
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto f = lower(fields[i]);
    if (!s && in(student_names, f)) s = i;
    else if (!t && in(time_names, f)) t = i;
    else if (!l && in(loc_names, f)) l = i;
  }
  if (!s && !t && !l) return std::nullopt;
  if (!t || !l || (format == IngestFormat::single_file && !s)) {
    throw DataError("header is missing a required column (timestamp, location" +
                    std::string(format == IngestFormat::single_file ? ", student)" : ")"));
  }
  Columns c;
  c.timestamp = *t;
  c.location = *l;
  if (format == IngestFormat::single_file) c.student = s;
  c.required = std::max({c.timestamp, c.location, c.student.value_or(0)}) + 1;
  return c;
}

Columns default_columns(IngestFormat format) {
  Columns c;
  if (format == IngestFormat::single_file) {
    c.student = 0;
    c.timestamp = 1;
    c.location = 2;
    c.required = 3;
  }
  return c;
}

struct RawRecord {
  CheckInRecord record;
  std::string source;
  std::size_t line = 0;
};

void parse_stream(std::istream& in, IngestFormat format, const StudyCalendar& calendar,
                  const std::string& source_name, std::vector<RawRecord>& out,
                  IngestReport& report) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<char> delim;
  Columns cols = default_columns(format);
  const std::string file_student =
      format == IngestFormat::per_student ? student_id_from_path(source_name) : std::string{};

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (!delim) {
      delim = view.find('\t') != std::string_view::npos ? '\t' : ',';
      if (auto header = columns_from_header(split(view, *delim), format)) {
        cols = *header;
        continue;
      }
    }
    ++report.input_lines;
    auto reject = [&](std::string reason) {
      report.rejected.push_back({source_name, line_no, std::move(reason)});
    };
    const auto fields = split(view, *delim);
    if (fields.size() < cols.required) {
      reject("expected at least " + std::to_string(cols.required) + " fields");
      continue;
    }
    const auto ts = parse_timestamp(fields[cols.timestamp]);
    if (!ts) {
      reject("non-numeric timestamp '" + std::string(fields[cols.timestamp]) + "'");
      continue;
    }
    std::string student = cols.student ? std::string(fields[*cols.student]) : file_student;
    std::string location(fields[cols.location]);
    if (student.empty() || location.empty()) {
      reject("empty student or location id");
      continue;
    }
    if (student.find_first_of(" \t") != std::string::npos) {
      reject("student id contains whitespace");
      continue;
    }
    if (!calendar.in_range(*ts)) {
      reject("timestamp outside study range");
      continue;
    }
    out.push_back({{std::move(student), *ts, std::move(location)}, source_name, line_no});
  }
  if (in.bad()) throw DataError("read error in " + source_name);
}

ParsedLog finish(std::vector<RawRecord> raw, const StudyCalendar& calendar, IngestReport report) {
  // Stable by input order so the first occurrence of a duplicate survives.
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawRecord& a, const RawRecord& b) { return a.record < b.record; });
  std::vector<CheckInRecord> records;
  records.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!records.empty() && raw[i].record == records.back()) {
      ++report.duplicates;
      report.rejected.push_back({raw[i].source, raw[i].line, "duplicate record"});
      continue;
    }
    records.push_back(std::move(raw[i].record));
  }
  report.accepted = records.size();
  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const Rejection& a, const Rejection& b) {
              return std::tie(a.source, a.line) < std::tie(b.source, b.line);
            });
  return {EventLog(std::move(records), calendar), std::move(report)};
}

}  // namespace

EventLog::EventLog(std::vector<CheckInRecord> records, StudyCalendar calendar)
    : records_(std::move(records)), calendar_(std::move(calendar)) {
  std::sort(records_.begin(), records_.end(), [](const CheckInRecord& a, const CheckInRecord& b) {
    return std::tie(a.timestamp, a.student, a.location) <
           std::tie(b.timestamp, b.student, b.location);
  });
  const auto before = records_.size();
  records_.erase(std::unique(records_.begin(), records_.end()), records_.end());
  duplicates_ = before - records_.size();

  std::map<std::string, std::vector<std::size_t>> per_student;
  std::map<std::pair<std::string, std::int64_t>, std::vector<std::size_t>> per_bucket;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    per_student[r.student].push_back(i);
    per_bucket[{r.location, calendar_.day_of(r.timestamp)}].push_back(i);
  }
  for (auto& [id, idx] : per_student) {
    students_.push_back(id);
    by_student_.push_back(std::move(idx));
  }
  for (auto& [key, idx] : per_bucket) {
    buckets_.push_back({key.first, key.second, std::move(idx)});
  }
}

std::vector<CheckInRecord> EventLog::events_of(std::string_view student) const {
  const auto it = std::lower_bound(students_.begin(), students_.end(), student);
  if (it == students_.end() || *it != student) return {};
  std::vector<CheckInRecord> out;
  for (auto i : by_student_[static_cast<std::size_t>(it - students_.begin())]) {
    out.push_back(records_[i]);
  }
  return out;
}

IngestFormat parse_ingest_format(std::string_view text) {
  if (text == "per-student" || text == "per_student") return IngestFormat::per_student;
  if (text == "single-file" || text == "single_file") return IngestFormat::single_file;
  throw DataError("unknown ingest format '" + std::string(text) + "'");
}

std::string student_id_from_path(const std::filesystem::path& path) {
  return path.stem().string();
}

ParsedLog parse_checkins(std::istream& in, IngestFormat format, const StudyCalendar& calendar,
                         const std::string& source_name) {
  std::vector<RawRecord> raw;
  IngestReport report;
  parse_stream(in, format, calendar, source_name, raw, report);
  return finish(std::move(raw), calendar, std::move(report));
}

ParsedLog parse_checkins(const std::filesystem::path& path, IngestFormat format,
                         const StudyCalendar& calendar) {
  namespace fs = std::filesystem;
  std::error_code ec;
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw DataError("cannot read input '" + path.string() + "'");
  }

  std::vector<RawRecord> raw;
  IngestReport report;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open '" + file.string() + "'");
    parse_stream(in, format, calendar, file.string(), raw, report);
  }
  return finish(std::move(raw), calendar, std::move(report));
}

WeekPartition partition_weeks(const EventLog& log) {
  const auto& cal = log.calendar();
  WeekPartition part;
  std::map<int, std::vector<CheckInRecord>> by_label;
  int last_raw = 0;
  for (const auto& r : log.records()) {
    if (!cal.in_range(r.timestamp)) {
      ++part.rejected;
      continue;
    }
    const int raw = cal.raw_week_of(r.timestamp);
    last_raw = std::max(last_raw, raw);
    if (cal.is_excluded(raw)) {
      ++part.excluded;
      continue;
    }
    by_label[*cal.label_of_raw(raw)].push_back(r);
  }
  int labels = cal.label_count().value_or(0);
  if (!cal.label_count()) {
    for (int raw = last_raw; raw >= 1 && labels == 0; --raw) {
      labels = cal.label_of_raw(raw).value_or(0);
    }
  }
  for (int label = 1; label <= labels; ++label) {
    auto it = by_label.find(label);
    part.weeks.push_back({label, cal.raw_of_label(label),
                          EventLog(it == by_label.end() ? std::vector<CheckInRecord>{}
                                                        : std::move(it->second),
                                   cal)});
  }
  return part;
}

EventLog select_weeks(const EventLog& log, int from, int to) {
  const auto& cal = log.calendar();
  return log.filter([&](const CheckInRecord& r) {
    if (!cal.in_range(r.timestamp)) return false;
    const auto label = cal.label_of_raw(cal.raw_week_of(r.timestamp));
    return label && *label >= from && *label <= to;
  });
}

void write_events(std::ostream& out, const EventLog& log) {
  out << "student\ttimestamp\tlocation\n";
  for (const auto& r : log.records()) {
    out << r.student << '\t' << r.timestamp << '\t' << r.location << '\n';
  }
}

}  // namespace conet
