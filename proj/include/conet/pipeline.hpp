#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "conet/calendar.hpp"
#include "conet/ingest.hpp"
#include "conet/metrics.hpp"
#include "conet/nullmodel.hpp"
#include "conet/stats.hpp"

namespace conet {

/// Settings for a full run. JSON keys equal the long CLI flag names
/// ("study-start", "tz-offset", ...).
struct PipelineConfig {
  /// Raw check-in file or directory. Ignored when `synth_spec` is set.
  std::filesystem::path input;
  IngestFormat format = IngestFormat::per_student;
  /// Cohort spec to generate and analyse instead of reading `input`.
  std::filesystem::path synth_spec;

  CivilDate study_start{2013, 1, 6};
  Seconds tz_offset = kDefaultTzOffset;
  std::set<int> exclude_weeks;
  std::optional<int> weeks;

  Seconds threshold = 1200;
  NullModelConfig null_model;
  LowDegreeRule clustering_rule = LowDegreeRule::count_as_zero;

  /// First week label of the cumulative networks.
  int anchor = 11;
  std::filesystem::path scores;
  std::filesystem::path roster;
  std::vector<CentralityKind> kinds{CentralityKind::degree, CentralityKind::closeness,
                                    CentralityKind::betweenness};
  CentralityKind layout_kind = CentralityKind::degree;
  PValueMethod pvalue = PValueMethod::automatic;
  AbsentRule absent = AbsentRule::zero;

  std::filesystem::path out = "report";
  std::uint64_t seed = 0;

  StudyCalendar calendar() const;
};

/// Reads a JSON config; unknown keys are a DataError.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_json(const std::string& text, PipelineConfig base = {});
std::string pipeline_config_to_json(const PipelineConfig& config);

/// Every recognised config key.
std::span<const std::string_view> pipeline_config_keys();
/// Applies key = value overrides given as text (numbers are parsed for
/// numeric keys). Paths are taken as given.
PipelineConfig apply_config_overrides(PipelineConfig base, const std::map<std::string, std::string>& overrides);

struct PipelineReport {
  std::vector<std::string> warnings;
  std::size_t weeks = 0;
  std::size_t roster_size = 0;
  std::vector<std::filesystem::path> files;
};

/// Runs ingest, weekly graphs, null-model baselines, cumulative correlations
/// and layouts, writing every output under `config.out`:
///
///   manifest.json            parameters, seeds and status
///   ingest_manifest.tsv      record counts
///   events.tsv               normalized accepted events
///   graphs/                  weekly and cumulative graphs (.edges, .json)
///   fig1a_topology.tsv       node / edge / degree / clustering per week
///   fig1b_clustering.tsv     actual vs null-model clustering per week
///   table1.txt, table1.tsv   centrality-trait correlations
///   layout_*.tsv, scatter_*.tsv  core-periphery and scatter data
///
/// On failure a FAILED file holding the message is written, the manifest is
/// marked failed, and the exception propagates.
PipelineReport run_pipeline(const PipelineConfig& config);

/// The anchor, midpoint and final labels used for layout output.
std::vector<int> layout_weeks(int anchor, int last);

}  // namespace conet
