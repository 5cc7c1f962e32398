#include "conet/calendar.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <algorithm>

namespace conet {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw DataError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

CivilDate parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw DataError("invalid date (expected YYYY-MM-DD): '" + std::string(text) + "'");
  }
  CivilDate d{parse_int(text.substr(0, 4), "year"),
              static_cast<unsigned>(parse_int(text.substr(5, 2), "month")),
              static_cast<unsigned>(parse_int(text.substr(8, 2), "day"))};
  const std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month},
                                        std::chrono::day{d.day}};
  if (!ymd.ok()) throw DataError("invalid calendar date: '" + std::string(text) + "'");
  return d;
}

std::string format_date(const CivilDate& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", date.year, date.month, date.day);
  return buf;
}

std::int64_t days_from_civil(const CivilDate& date) {
  const std::chrono::sys_days days{std::chrono::year{date.year} / std::chrono::month{date.month} /
                                   std::chrono::day{date.day}};
  return days.time_since_epoch().count();
}

StudyCalendar::StudyCalendar(CivilDate start, Seconds tz_offset, std::set<int> excluded_weeks,
                             std::optional<int> week_count)
    : start_(start), tz_offset_(tz_offset), excluded_(std::move(excluded_weeks)),
      week_count_(week_count) {
  if (week_count_ && *week_count_ < 1) {
    throw std::invalid_argument("week_count must be >= 1");
  }
  for (int w : excluded_) {
    if (w < 1) throw std::invalid_argument("excluded week indices are 1-based");
  }
}

Seconds StudyCalendar::study_start() const {
  return days_from_civil(start_) * kSecondsPerDay - tz_offset_;
}

std::optional<Seconds> StudyCalendar::study_end() const {
  if (!week_count_) return std::nullopt;
  return study_start() + static_cast<Seconds>(*week_count_) * kDaysPerWeek * kSecondsPerDay;
}

std::int64_t StudyCalendar::day_of(Seconds t) const {
  return floor_div(t + tz_offset_ - days_from_civil(start_) * kSecondsPerDay, kSecondsPerDay);
}

int StudyCalendar::raw_week_of(Seconds t) const {
  return static_cast<int>(floor_div(day_of(t), kDaysPerWeek)) + 1;
}

bool StudyCalendar::in_range(Seconds t) const {
  if (t < study_start()) return false;
  if (auto end = study_end()) return t < *end;
  return true;
}

std::optional<int> StudyCalendar::label_of_raw(int raw_week) const {
  if (raw_week < 1 || is_excluded(raw_week)) return std::nullopt;
  if (week_count_ && raw_week > *week_count_) return std::nullopt;
  const auto before = std::distance(excluded_.begin(), excluded_.lower_bound(raw_week));
  return raw_week - static_cast<int>(before);
}

int StudyCalendar::raw_of_label(int label) const {
  if (label < 1) throw std::out_of_range("week labels are 1-based");
  int raw = label;
  // Each excluded week at or before the running raw index shifts it by one.
  for (int w : excluded_) {
    if (w <= raw) ++raw;
  }
  if (week_count_ && raw > *week_count_) {
    throw std::out_of_range("week label " + std::to_string(label) + " past end of study");
  }
  return raw;
}

std::optional<int> StudyCalendar::label_count() const {
  if (!week_count_) return std::nullopt;
  const auto excluded_inside = std::count_if(excluded_.begin(), excluded_.end(),
                                             [&](int w) { return w <= *week_count_; });
  return *week_count_ - static_cast<int>(excluded_inside);
}

std::set<int> parse_int_list(std::string_view text) {
  std::set<int> out;
  text = trim(text);
  if (text.empty() || text == "none") return out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.insert(parse_int(item, "week index"));
    } else {
      const int lo = parse_int(trim(item.substr(0, dash)), "week index");
      const int hi = parse_int(trim(item.substr(dash + 1)), "week index");
      if (lo > hi) throw DataError("invalid range '" + std::string(item) + "'");
      for (int i = lo; i <= hi; ++i) out.insert(i);
    }
  }
  return out;
}

}  // namespace conet
