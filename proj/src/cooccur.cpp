#include "conet/cooccur.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

namespace conet {

namespace {

using BucketKey = std::pair<std::string, std::int64_t>;

std::map<BucketKey, std::vector<Seconds>> bucket_times(std::span<const CheckInRecord> events,
                                                       const StudyCalendar& cal) {
  std::map<BucketKey, std::vector<Seconds>> out;
  for (const auto& r : events) out[{r.location, cal.day_of(r.timestamp)}].push_back(r.timestamp);
  for (auto& [key, times] : out) std::sort(times.begin(), times.end());
  return out;
}

auto witness_key(const Witness& w) {
  return std::make_tuple(std::min(w.t_u, w.t_v), std::max(w.t_u, w.t_v), w.location);
}

}  // namespace

std::string WindowLabel::tag() const {
  char buf[48];
  if (cumulative) {
    std::snprintf(buf, sizeof buf, "cumulative_%02d_%02d", from, to);
  } else {
    std::snprintf(buf, sizeof buf, "week_%02d", from);
  }
  return buf;
}

std::optional<Witness> cooccurs(std::span<const CheckInRecord> u_events,
                                std::span<const CheckInRecord> v_events, Seconds threshold,
                                const StudyCalendar& calendar) {
  if (!u_events.empty() && !v_events.empty() && u_events.front().student == v_events.front().student) {
    throw std::invalid_argument("co-occurrence of a student with itself is undefined");
  }
  if (u_events.empty() || v_events.empty()) return std::nullopt;
  const auto ub = bucket_times(u_events, calendar);
  const auto vb = bucket_times(v_events, calendar);

  std::optional<Witness> best;
  auto offer = [&](const BucketKey& key, Seconds tu, Seconds tv) {
    Witness w{u_events.front().student, v_events.front().student, key.first, key.second, tu, tv};
    if (!best || witness_key(w) < witness_key(*best)) best = std::move(w);
  };
  for (const auto& [key, utimes] : ub) {
    const auto it = vb.find(key);
    if (it == vb.end()) continue;
    const auto& vtimes = it->second;
    // For the earliest pair the partner of each event is the first event of
    // the other student at or after it.
    for (Seconds tu : utimes) {
      const auto next = std::lower_bound(vtimes.begin(), vtimes.end(), tu);
      if (next != vtimes.end() && *next - tu <= threshold) offer(key, tu, *next);
    }
    for (Seconds tv : vtimes) {
      const auto next = std::lower_bound(utimes.begin(), utimes.end(), tv);
      if (next != utimes.end() && *next - tv <= threshold) offer(key, *next, tv);
    }
  }
  return best;
}

CoOccurrenceGraph build_window_graph(const EventLog& events, Seconds threshold, WindowLabel label,
                                     bool keep_witnesses) {
  if (threshold < 0) throw std::invalid_argument("threshold must be non-negative");
  const auto& records = events.records();
  std::map<NamedEdge, Witness> found;
  for (const auto& bucket : events.buckets()) {
    const auto& idx = bucket.records;
    std::size_t lo = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto& rj = records[idx[j]];
      while (rj.timestamp - records[idx[lo]].timestamp > threshold) ++lo;
      for (std::size_t i = lo; i < j; ++i) {
        const auto& ri = records[idx[i]];
        if (ri.student == rj.student) continue;
        const bool i_first = ri.student < rj.student;
        const auto& a = i_first ? ri : rj;
        const auto& b = i_first ? rj : ri;
        Witness w{a.student, b.student, bucket.location, bucket.day, a.timestamp, b.timestamp};
        auto [it, inserted] = found.try_emplace({a.student, b.student}, w);
        if (!inserted && witness_key(w) < witness_key(it->second)) it->second = std::move(w);
      }
    }
  }

  std::vector<NamedEdge> edges;
  edges.reserve(found.size());
  for (const auto& [e, w] : found) edges.push_back(e);
  CoOccurrenceGraph g{label, threshold, Graph::from_edges(edges), {}};
  if (keep_witnesses) {
    for (auto& [e, w] : found) g.witnesses.push_back(std::move(w));
  }
  return g;
}

CoOccurrenceGraph build_week_graph(const WeekSlice& slice, Seconds threshold, bool keep_witnesses) {
  return build_window_graph(slice.events, threshold, WindowLabel::week(slice.label), keep_witnesses);
}

CoOccurrenceGraph build_cumulative_graph(const EventLog& log, int from, int to, Seconds threshold,
                                         bool keep_witnesses) {
  if (from < 1 || from > to) {
    throw std::invalid_argument("invalid cumulative range " + std::to_string(from) + ".." +
                                std::to_string(to));
  }
  if (auto count = log.calendar().label_count(); count && to > *count) {
    throw std::invalid_argument("cumulative range ends past week " + std::to_string(*count));
  }
  return build_window_graph(select_weeks(log, from, to), threshold, WindowLabel::range(from, to),
                            keep_witnesses);
}

double mean_dining_count(const EventLog& events, std::span<const std::string> students,
                         int weeks) {
  if (students.empty()) throw std::invalid_argument("mean dining count of an empty student set");
  if (weeks < 1) throw std::invalid_argument("mean dining count needs weeks >= 1");
  std::vector<std::string> sorted(students.begin(), students.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::size_t total = 0;
  for (const auto& r : events.records()) {
    if (std::binary_search(sorted.begin(), sorted.end(), r.student)) ++total;
  }
  return static_cast<double>(total) / (static_cast<double>(sorted.size()) * weeks);
}

}  // namespace conet
