#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conet/calendar.hpp"
#include "conet/graph.hpp"
#include "conet/ingest.hpp"

namespace conet {

inline constexpr Seconds kDefaultThreshold = 1200;

/// Which events a graph was built from: one week, or labels [from, to].
struct WindowLabel {
  int from = 0;
  int to = 0;
  bool cumulative = false;

  static WindowLabel week(int w) { return {w, w, false}; }
  static WindowLabel range(int from, int to) { return {from, to, true}; }
  /// "week_07" or "cumulative_11_15".
  std::string tag() const;

  friend bool operator==(const WindowLabel&, const WindowLabel&) = default;
};

/// The record pair that justifies one edge.
struct Witness {
  std::string u;
  std::string v;
  std::string location;
  std::int64_t day = 0;
  Seconds t_u = 0;
  Seconds t_v = 0;

  Seconds gap() const { return t_u > t_v ? t_u - t_v : t_v - t_u; }
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct CoOccurrenceGraph {
  WindowLabel label;
  Seconds threshold = kDefaultThreshold;
  Graph graph;
  /// One witness per edge, aligned with graph.sorted_edges(); filled on request.
  std::vector<Witness> witnesses;
};

/// Two students co-occur when some record of each shares location and local
/// day with timestamps at most `threshold` apart. Returns the earliest such
/// pair, ordered by (earlier timestamp, later timestamp, location).
///
/// Inputs must be time-sorted records of two different students; passing the
/// same student twice throws std::invalid_argument.
std::optional<Witness> cooccurs(std::span<const CheckInRecord> u_events,
                                std::span<const CheckInRecord> v_events, Seconds threshold,
                                const StudyCalendar& calendar);

/// Co-occurrence graph of every record pair in `events`.
CoOccurrenceGraph build_window_graph(const EventLog& events, Seconds threshold, WindowLabel label,
                                     bool keep_witnesses = false);

CoOccurrenceGraph build_week_graph(const WeekSlice& slice, Seconds threshold,
                                   bool keep_witnesses = false);

/// Graph of all events in labels [from, to]. Throws std::invalid_argument for
/// from < 1, from > to, or labels past the end of a bounded calendar.
CoOccurrenceGraph build_cumulative_graph(const EventLog& log, int from, int to, Seconds threshold,
                                         bool keep_witnesses = false);

/// Events per student per week. Throws std::invalid_argument for an empty
/// student set or weeks < 1.
double mean_dining_count(const EventLog& events, std::span<const std::string> students,
                         int weeks);

}  // namespace conet
