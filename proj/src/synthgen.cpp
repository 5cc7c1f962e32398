#include "conet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace conet {

namespace {

std::string padded(const char* prefix, int i, int count) {
  const int width = count >= 100 ? 3 : 2;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
  return buf;
}

struct Placement {
  int location = 0;
  Seconds center = 0;
};

}  // namespace

void CohortSpec::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (student_count < 1 || weeks < 1) throw std::invalid_argument("cohort needs students and weeks");
  if (location_count < 1) throw std::invalid_argument("cohort needs at least one location");
  if (!prob(p_core) || !prob(p_peri) || !prob(codine_rate)) {
    throw std::invalid_argument("cohort probabilities must lie in [0, 1]");
  }
  if (!(core_fraction > 0.0 && core_fraction < 1.0)) {
    throw std::invalid_argument("core_fraction must lie in (0, 1)");
  }
  if (meals_per_student_per_week < 0.0) throw std::invalid_argument("negative meal rate");
  if (threshold < 0 || close_time - open_time < threshold || open_time < 0 ||
      close_time > kSecondsPerDay) {
    throw std::invalid_argument("opening hours must fit in a day and span the threshold");
  }
  if (trait_noise_sd < 0.0 || f1_sd < 0.0) throw std::invalid_argument("negative standard deviation");
  const auto labels = *calendar().label_count();
  if (labels < 1) throw std::invalid_argument("every week is excluded");
  const int from = resolved_analysis_from(), to = resolved_analysis_to();
  if (from < 1 || from > to || to > labels) throw std::invalid_argument("invalid analysis window");
}

StudyCalendar CohortSpec::calendar() const {
  return StudyCalendar(study_start, tz_offset, excluded_weeks, weeks);
}

int CohortSpec::resolved_analysis_from() const {
  if (analysis_from > 0) return analysis_from;
  return *calendar().label_count() / 2 + 1;
}

int CohortSpec::resolved_analysis_to() const {
  if (analysis_to > 0) return analysis_to;
  return *calendar().label_count();
}

std::vector<NamedEdge> GroundTruth::codined_pairs(int from, int to) const {
  std::vector<NamedEdge> out;
  for (const auto& [pair, weeks] : codined_weeks) {
    const auto it = weeks.lower_bound(from);
    if (it != weeks.end() && *it <= to) out.push_back(pair);
  }
  return out;
}

Cohort generate_cohort(const CohortSpec& spec) {
  spec.validate();
  const auto cal = spec.calendar();
  std::mt19937_64 rng(spec.seed);
  const int n = spec.student_count;

  GroundTruth truth;
  for (int i = 1; i <= n; ++i) truth.students.push_back(padded("s", i, n));
  std::vector<std::string> locations;
  for (int i = 1; i <= spec.location_count; ++i) locations.push_back(padded("loc", i, spec.location_count));

  {
    std::vector<std::string> shuffled = truth.students;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto core_size = std::clamp<long>(std::lround(spec.core_fraction * n), 1, n);
    truth.core.insert(shuffled.begin(), shuffled.begin() + core_size);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& u = truth.students[static_cast<std::size_t>(i)];
      const auto& v = truth.students[static_cast<std::size_t>(j)];
      const double p = truth.core.contains(u) && truth.core.contains(v) ? spec.p_core : spec.p_peri;
      if (unit(rng) < p) truth.ties.emplace_back(u, v);
    }
  }

  const Seconds half = spec.threshold / 2;
  std::uniform_int_distribution<int> pick_location(0, spec.location_count - 1);
  std::uniform_int_distribution<Seconds> pick_center(spec.open_time + half, spec.close_time - half);
  std::uniform_int_distribution<Seconds> pick_offset(-half, half);
  const double daily_meals = spec.meals_per_student_per_week / 7.0;
  const int whole_meals = static_cast<int>(std::floor(daily_meals));
  const double extra_meal = daily_meals - whole_meals;

  std::vector<CheckInRecord> records;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < truth.students.size(); ++i) index_of[truth.students[i]] = i;

  const int days = spec.weeks * static_cast<int>(kDaysPerWeek);
  for (int day = 0; day < days; ++day) {
    const Seconds midnight = cal.study_start() + static_cast<Seconds>(day) * kSecondsPerDay;
    const auto label = cal.label_of_raw(day / static_cast<int>(kDaysPerWeek) + 1);
    std::vector<std::vector<Seconds>> centers(static_cast<std::size_t>(spec.location_count));

    auto place = [&]() {
      Placement best{pick_location(rng), pick_center(rng)};
      if (spec.isolate_meals) {
        auto clear = [&](const Placement& p) {
          for (Seconds c : centers[static_cast<std::size_t>(p.location)]) {
            if (std::abs(c - p.center) <= 2 * spec.threshold) return false;
          }
          return true;
        };
        for (int attempt = 0; attempt < 64 && !clear(best); ++attempt) {
          best = {pick_location(rng), pick_center(rng)};
        }
      }
      centers[static_cast<std::size_t>(best.location)].push_back(best.center);
      return best;
    };

    std::vector<int> joint(static_cast<std::size_t>(n), 0);
    for (const auto& tie : truth.ties) {
      if (unit(rng) >= spec.codine_rate) continue;
      const bool u_starts = unit(rng) < 0.5;
      const auto& first = u_starts ? tie.first : tie.second;
      const auto& second = u_starts ? tie.second : tie.first;
      const auto p = place();
      const auto& loc = locations[static_cast<std::size_t>(p.location)];
      records.push_back({first, midnight + p.center, loc});
      records.push_back({second, midnight + p.center + pick_offset(rng), loc});
      ++joint[index_of[tie.first]];
      ++joint[index_of[tie.second]];
      if (label) truth.codined_weeks[tie].insert(*label);
    }
    for (int s = 0; s < n; ++s) {
      const int meals = whole_meals + (unit(rng) < extra_meal ? 1 : 0);
      for (int m = joint[static_cast<std::size_t>(s)]; m < meals; ++m) {
        const auto p = place();
        records.push_back({truth.students[static_cast<std::size_t>(s)], midnight + p.center,
                           locations[static_cast<std::size_t>(p.location)]});
      }
    }
  }

  truth.analysis_from = spec.resolved_analysis_from();
  truth.analysis_to = spec.resolved_analysis_to();
  for (const auto& s : truth.students) truth.partner_count[s] = 0;
  for (const auto& [u, v] : truth.codined_pairs(truth.analysis_from, truth.analysis_to)) {
    ++truth.partner_count[u];
    ++truth.partner_count[v];
  }

  double mean_count = 0.0;
  for (const auto& [s, c] : truth.partner_count) mean_count += c;
  mean_count /= n;
  std::normal_distribution<double> noise(0.0, 1.0);
  TraitScores scores;
  for (const auto& s : truth.students) {
    const double raw = spec.trait_slope * (truth.partner_count[s] - mean_count) + spec.trait_noise_sd * noise(rng);
    const int df = std::clamp(static_cast<int>(std::lround(raw)), -48, 48);
    const int lo = std::max(kFlourishingMin, kFlourishingMin - df);
    const int hi = std::min(kFlourishingMax, kFlourishingMax - df);
    const int f1 = std::clamp(static_cast<int>(std::lround(spec.f1_mean + spec.f1_sd * noise(rng))), lo, hi);
    scores.add(s, f1, f1 + df);
  }

  return {EventLog(std::move(records), cal), std::move(scores), std::move(truth)};
}

namespace {

void to_json(nlohmann::json& j, const CohortSpec& s) {
  j = nlohmann::json{{"student_count", s.student_count},
                     {"location_count", s.location_count},
                     {"weeks", s.weeks},
                     {"study_start", format_date(s.study_start)},
                     {"tz_offset", s.tz_offset},
                     {"excluded_weeks", s.excluded_weeks},
                     {"core_fraction", s.core_fraction},
                     {"p_core", s.p_core},
                     {"p_peri", s.p_peri},
                     {"codine_rate", s.codine_rate},
                     {"meals_per_student_per_week", s.meals_per_student_per_week},
                     {"open_time", s.open_time},
                     {"close_time", s.close_time},
                     {"threshold", s.threshold},
                     {"isolate_meals", s.isolate_meals},
                     {"analysis_from", s.analysis_from},
                     {"analysis_to", s.analysis_to},
                     {"trait_slope", s.trait_slope},
                     {"trait_noise_sd", s.trait_noise_sd},
                     {"f1_mean", s.f1_mean},
                     {"f1_sd", s.f1_sd},
                     {"seed", s.seed}};
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

CohortSpec cohort_spec_from_json(const std::string& text) {
  CohortSpec s;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items()) {
      static const std::set<std::string> known{
          "student_count", "location_count", "weeks", "study_start", "tz_offset", "excluded_weeks",
          "core_fraction", "p_core", "p_peri", "codine_rate", "meals_per_student_per_week",
          "open_time", "close_time", "threshold", "isolate_meals", "analysis_from", "analysis_to",
          "trait_slope", "trait_noise_sd", "f1_mean", "f1_sd", "seed"};
      if (!known.contains(key)) throw DataError("unknown cohort spec key '" + key + "'");
    }
    read(j, "student_count", s.student_count);
    read(j, "location_count", s.location_count);
    read(j, "weeks", s.weeks);
    if (j.contains("study_start")) s.study_start = parse_date(j.at("study_start").get<std::string>());
    read(j, "tz_offset", s.tz_offset);
    read(j, "excluded_weeks", s.excluded_weeks);
    read(j, "core_fraction", s.core_fraction);
    read(j, "p_core", s.p_core);
    read(j, "p_peri", s.p_peri);
    read(j, "codine_rate", s.codine_rate);
    read(j, "meals_per_student_per_week", s.meals_per_student_per_week);
    read(j, "open_time", s.open_time);
    read(j, "close_time", s.close_time);
    read(j, "threshold", s.threshold);
    read(j, "isolate_meals", s.isolate_meals);
    read(j, "analysis_from", s.analysis_from);
    read(j, "analysis_to", s.analysis_to);
    read(j, "trait_slope", s.trait_slope);
    read(j, "trait_noise_sd", s.trait_noise_sd);
    read(j, "f1_mean", s.f1_mean);
    read(j, "f1_sd", s.f1_sd);
    read(j, "seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid cohort spec: ") + e.what());
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid cohort spec: ") + e.what());
  }
  return s;
}

CohortSpec load_cohort_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open spec '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return cohort_spec_from_json(text);
}

std::string cohort_spec_to_json(const CohortSpec& spec) {
  nlohmann::json j;
  to_json(j, spec);
  return j.dump(2);
}

void write_cohort(const Cohort& cohort, const CohortSpec& spec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "events.tsv");
    write_events(out, cohort.log);
  }
  {
    std::ofstream out(dir / "scores.tsv");
    cohort.scores.write(out);
  }
  nlohmann::json truth;
  nlohmann::json spec_json;
  to_json(spec_json, spec);
  truth["spec"] = spec_json;
  truth["core"] = cohort.truth.core;
  truth["analysis_from"] = cohort.truth.analysis_from;
  truth["analysis_to"] = cohort.truth.analysis_to;
  auto& ties = truth["ties"] = nlohmann::json::array();
  for (const auto& tie : cohort.truth.ties) {
    const auto it = cohort.truth.codined_weeks.find(tie);
    ties.push_back({{"u", tie.first},
                    {"v", tie.second},
                    {"codined_weeks", it == cohort.truth.codined_weeks.end() ? std::set<int>{} : it->second}});
  }
  truth["partner_count"] = cohort.truth.partner_count;
  std::ofstream out(dir / "ground_truth.json");
  out << truth.dump(2) << '\n';
  if (!out) throw DataError("cannot write cohort into '" + dir.string() + "'");
}

}  // namespace conet
