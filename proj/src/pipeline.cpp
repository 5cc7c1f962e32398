#include "conet/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "conet/cooccur.hpp"
#include "conet/io.hpp"
#include "conet/layout.hpp"
#include "conet/synthgen.hpp"

namespace conet {

namespace {

using nlohmann::json;

std::string_view counting_name(SwapCounting c) {
  return c == SwapCounting::accepted ? "accepted" : "attempts";
}

std::string_view rule_name(LowDegreeRule r) {
  return r == LowDegreeRule::count_as_zero ? "zero" : "exclude";
}

std::string_view pvalue_name(PValueMethod m) {
  switch (m) {
    case PValueMethod::automatic: return "auto";
    case PValueMethod::exact: return "exact";
    case PValueMethod::t_approx: return "t";
    case PValueMethod::monte_carlo: return "monte-carlo";
  }
  return "auto";
}

std::string kinds_text(const std::vector<CentralityKind>& kinds) {
  std::string out;
  for (auto k : kinds) {
    if (!out.empty()) out += ',';
    out += short_name(k);
  }
  return out;
}

json config_json(const PipelineConfig& c) {
  json j;
  j["input"] = c.input.string();
  j["format"] = c.format == IngestFormat::per_student ? "per-student" : "single-file";
  j["synth-spec"] = c.synth_spec.string();
  j["study-start"] = format_date(c.study_start);
  j["tz-offset"] = c.tz_offset;
  j["exclude-weeks"] = c.exclude_weeks;
  j["weeks"] = c.weeks ? json(*c.weeks) : json(nullptr);
  j["threshold"] = c.threshold;
  j["replicates"] = c.null_model.replicate_count;
  j["multiplier"] = c.null_model.swap_rounds_multiplier;
  j["max-attempts"] = c.null_model.max_attempts_per_round;
  j["swap-counting"] = counting_name(c.null_model.counting);
  j["pairing"] = c.null_model.pairing == PairingRule::uniform ? "uniform" : "cross";
  j["threads"] = c.null_model.threads;
  j["clustering-rule"] = rule_name(c.clustering_rule);
  j["anchor"] = c.anchor;
  j["scores"] = c.scores.string();
  j["roster"] = c.roster.string();
  j["kinds"] = kinds_text(c.kinds);
  j["layout-kind"] = short_name(c.layout_kind);
  j["pvalue"] = pvalue_name(c.pvalue);
  j["absent"] = absent_rule_name(c.absent);
  j["out"] = c.out.string();
  j["seed"] = c.seed;
  return j;
}

/// Seed of the null-model ensemble for one weekly graph.
std::uint64_t week_seed(std::uint64_t master, int label) {
  return mix64(master ^ mix64(static_cast<std::uint64_t>(label)));
}

std::ofstream open_out(const std::filesystem::path& path, std::vector<std::filesystem::path>& files) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  files.push_back(path);
  return out;
}

}  // namespace

std::span<const std::string_view> pipeline_config_keys() {
  static constexpr std::string_view keys[] = {
      "input", "format", "synth-spec", "study-start", "tz-offset", "exclude-weeks", "weeks",
      "threshold", "replicates", "multiplier", "max-attempts", "swap-counting", "pairing",
      "threads", "clustering-rule", "anchor", "scores", "roster", "kinds", "layout-kind",
      "pvalue", "absent", "out", "seed"};
  return keys;
}

PipelineConfig apply_config_overrides(PipelineConfig base, const std::map<std::string, std::string>& overrides) {
  static const std::set<std::string_view> numeric{"tz-offset", "weeks", "threshold", "replicates", "multiplier",
                                                  "max-attempts", "threads", "anchor", "seed"};
  json j = json::object();
  for (const auto& [key, value] : overrides) {
    if (numeric.contains(key)) {
      const auto v = json::parse(value, nullptr, false);
      if (!v.is_number_integer()) throw std::invalid_argument("--" + key + " expects an integer, got '" + value + "'");
      j[key] = v;
    } else {
      j[key] = value;
    }
  }
  return pipeline_config_from_json(j.dump(), std::move(base));
}

StudyCalendar PipelineConfig::calendar() const {
  return StudyCalendar(study_start, tz_offset, exclude_weeks, weeks);
}

PipelineConfig pipeline_config_from_json(const std::string& text, PipelineConfig c) {
  try {
    const auto j = json::parse(text);
    const auto keys = pipeline_config_keys();
    for (const auto& [key, value] : j.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw DataError("unknown config key '" + key + "'");
      }
    }
    auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
    if (j.contains("input")) c.input = str("input");
    if (j.contains("format")) c.format = parse_ingest_format(str("format"));
    if (j.contains("synth-spec")) c.synth_spec = str("synth-spec");
    if (j.contains("study-start")) c.study_start = parse_date(str("study-start"));
    if (j.contains("tz-offset")) c.tz_offset = j.at("tz-offset").get<Seconds>();
    if (j.contains("exclude-weeks")) {
      const auto& v = j.at("exclude-weeks");
      c.exclude_weeks = v.is_string() ? parse_int_list(v.get<std::string>()) : v.get<std::set<int>>();
    }
    if (j.contains("weeks") && !j.at("weeks").is_null()) c.weeks = j.at("weeks").get<int>();
    if (j.contains("threshold")) c.threshold = j.at("threshold").get<Seconds>();
    if (j.contains("replicates")) c.null_model.replicate_count = j.at("replicates").get<unsigned>();
    if (j.contains("multiplier")) c.null_model.swap_rounds_multiplier = j.at("multiplier").get<unsigned>();
    if (j.contains("max-attempts")) c.null_model.max_attempts_per_round = j.at("max-attempts").get<unsigned>();
    if (j.contains("swap-counting")) {
      const auto v = str("swap-counting");
      if (v != "accepted" && v != "attempts") throw DataError("swap-counting must be accepted|attempts");
      c.null_model.counting = v == "accepted" ? SwapCounting::accepted : SwapCounting::attempts;
    }
    if (j.contains("pairing")) {
      const auto v = str("pairing");
      if (v != "uniform" && v != "cross") throw DataError("pairing must be uniform|cross");
      c.null_model.pairing = v == "uniform" ? PairingRule::uniform : PairingRule::cross;
    }
    if (j.contains("threads")) c.null_model.threads = j.at("threads").get<unsigned>();
    if (j.contains("clustering-rule")) {
      const auto v = str("clustering-rule");
      if (v != "zero" && v != "exclude") throw DataError("clustering-rule must be zero|exclude");
      c.clustering_rule = v == "zero" ? LowDegreeRule::count_as_zero : LowDegreeRule::exclude;
    }
    if (j.contains("anchor")) c.anchor = j.at("anchor").get<int>();
    if (j.contains("scores")) c.scores = str("scores");
    if (j.contains("roster")) c.roster = str("roster");
    if (j.contains("kinds")) c.kinds = parse_centrality_kinds(str("kinds"));
    if (j.contains("layout-kind")) c.layout_kind = parse_centrality_kind(str("layout-kind"));
    if (j.contains("pvalue")) c.pvalue = parse_pvalue_method(str("pvalue"));
    if (j.contains("absent")) c.absent = parse_absent_rule(str("absent"));
    if (j.contains("out")) c.out = str("out");
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  PipelineConfig c = pipeline_config_from_json(buf.str());
  // Relative paths in a config file resolve against the file's directory.
  const auto base = path.parent_path();
  for (auto* p : {&c.input, &c.synth_spec, &c.scores, &c.roster}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

std::string pipeline_config_to_json(const PipelineConfig& config) {
  return config_json(config).dump(2);
}

std::vector<int> layout_weeks(int anchor, int last) {
  std::vector<int> out{anchor};
  const int mid = anchor + (last - anchor) / 2;
  if (mid != anchor) out.push_back(mid);
  if (last != mid) out.push_back(last);
  return out;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  PipelineReport report;
  json manifest;
  manifest["config"] = config_json(config);
  manifest["status"] = "running";
  const fs::path out = config.out;
  fs::create_directories(out);
  fs::remove(out / "FAILED");

  auto write_manifest = [&]() {
    manifest["warnings"] = report.warnings;
    std::ofstream m(out / "manifest.json");
    m << manifest.dump(2) << '\n';
  };
  auto warn = [&](std::string message) { report.warnings.push_back(std::move(message)); };

  try {
    config.null_model.validate();
    // Stage 1: events and scores.
    EventLog log;
    IngestReport ingest;
    std::optional<TraitScores> scores;
    StudyCalendar cal = config.calendar();
    if (!config.synth_spec.empty()) {
      const auto spec = load_cohort_spec(config.synth_spec);
      const auto cohort = generate_cohort(spec);
      write_cohort(cohort, spec, out / "synthetic");
      cal = spec.calendar();
      manifest["calendar_source"] = "synth-spec";
      auto parsed = parse_checkins(out / "synthetic" / "events.tsv", IngestFormat::single_file, cal);
      log = std::move(parsed.log);
      ingest = std::move(parsed.report);
      scores = cohort.scores;
    } else {
      if (config.input.empty()) throw DataError("config names neither 'input' nor 'synth-spec'");
      auto parsed = parse_checkins(config.input, config.format, cal);
      log = std::move(parsed.log);
      ingest = std::move(parsed.report);
    }
    if (!config.scores.empty()) scores = TraitScores::load(config.scores);

    const auto partition = partition_weeks(log);
    {
      auto f = open_out(out / "ingest_manifest.tsv", report.files);
      io::write_ingest_manifest(f, ingest, partition, log);
      auto e = open_out(out / "events.tsv", report.files);
      write_events(e, log);
    }
    manifest["records"] = {{"input_lines", ingest.input_lines},
                           {"accepted", ingest.accepted},
                           {"rejected", ingest.rejected.size()},
                           {"duplicates", ingest.duplicates},
                           {"excluded_week_records", partition.excluded}};
    if (log.empty()) warn("event log is empty");
    if (ingest.duplicates > 0) warn(std::to_string(ingest.duplicates) + " duplicate records dropped");

    // Stage 2: weekly graphs and topology.
    std::vector<CoOccurrenceGraph> weekly;
    for (const auto& slice : partition.weeks) {
      weekly.push_back(build_week_graph(slice, config.threshold));
      io::write_graph_files(out / "graphs", weekly.back());
    }
    report.weeks = weekly.size();
    const auto topology = topology_series(weekly, config.clustering_rule);
    {
      auto f = open_out(out / "fig1a_topology.tsv", report.files);
      io::write_topology(f, topology);
    }
    if (!log.students().empty() && !partition.weeks.empty()) {
      manifest["mean_dining_per_student_week"] =
          mean_dining_count(select_weeks(log, 1, static_cast<int>(partition.weeks.size())),
                            log.students(), static_cast<int>(partition.weeks.size()));
    }

    // Stage 3: null-model clustering baselines.
    {
      auto f = open_out(out / "fig1b_clustering.tsv", report.files);
      f << "window\tactual\tnull_mean\tnull_sd\treplicates\tsaturated\tseed\n";
      json seeds = json::object();
      for (const auto& g : weekly) {
        if (g.graph.edge_count() < 2) {
          const auto actual = g.graph.empty() ? std::string("NA")
                                              : io::number(average_clustering(g.graph, config.clustering_rule));
          f << g.label.tag() << '\t' << actual << "\tNA\tNA\t0\t0\tNA\n";
          warn(g.label.tag() + ": fewer than two edges, no null model");
          continue;
        }
        NullModelConfig nm = config.null_model;
        nm.master_seed = week_seed(config.seed, g.label.from);
        seeds[g.label.tag()] = nm.master_seed;
        const auto ens = null_clustering_baseline(g.graph, nm, g.label, config.clustering_rule);
        const double actual = average_clustering(g.graph, config.clustering_rule);
        f << g.label.tag() << '\t' << io::number(actual) << '\t' << io::number(ens.mean) << '\t'
          << io::number(ens.sd) << '\t' << ens.clustering.size() << '\t' << ens.saturated << '\t'
          << nm.master_seed << '\n';
        if (ens.saturated > 0) {
          warn(g.label.tag() + ": " + std::to_string(ens.saturated) + " saturated null replicates");
        }
      }
      manifest["null_model_seeds"] = seeds;
    }

    // Stage 4: cumulative graphs and correlations.
    const int last = static_cast<int>(weekly.size());
    std::vector<CoOccurrenceGraph> cumulative;
    if (last >= 1) {
      if (config.anchor < 1 || config.anchor > last) {
        throw DataError("anchor week " + std::to_string(config.anchor) + " outside 1.." + std::to_string(last));
      }
      for (int w = config.anchor; w <= last; ++w) {
        cumulative.push_back(build_cumulative_graph(log, config.anchor, w, config.threshold));
        io::write_graph_files(out / "graphs", cumulative.back());
      }
    }

    std::vector<std::string> roster;
    if (!scores) {
      warn("no trait scores; correlation and layout skipped");
    } else {
      if (!config.roster.empty()) {
        roster = io::read_roster(config.roster);
      } else {
        for (const auto& s : scores->students()) {
          if (std::binary_search(log.students().begin(), log.students().end(), s)) roster.push_back(s);
        }
      }
      for (const auto& s : roster) {
        if (!scores->contains(s)) throw DataError("roster student '" + s + "' has no trait scores");
      }
      report.roster_size = roster.size();
      manifest["roster_size"] = roster.size();
    }

    if (scores && !roster.empty() && !cumulative.empty()) {
      const auto table = correlation_table(cumulative, *scores, roster, config.kinds,
                                           {config.pvalue, config.seed, config.absent});
      auto t = open_out(out / "table1.txt", report.files);
      io::write_correlation_table(t, table);
      auto r = open_out(out / "table1.tsv", report.files);
      io::write_correlation_records(r, table);

      // Stage 5: layout and scatter data.
      const Eigen::VectorXd df = roster_values(*scores, roster, TraitField::df);
      const Eigen::VectorXd df_rank = rank_with_ties(df);
      std::map<std::string, double> df_ranks;
      for (std::size_t i = 0; i < roster.size(); ++i) df_ranks[roster[i]] = df_rank(static_cast<Eigen::Index>(i));
      for (int w : layout_weeks(config.anchor, last)) {
        const auto& g = cumulative[static_cast<std::size_t>(w - config.anchor)];
        const auto tag = g.label.tag() + "_" + std::string(short_name(config.layout_kind));
        if (g.graph.empty()) {
          warn(g.label.tag() + ": empty graph, no layout");
          continue;
        }
        const auto c = centrality(g.graph, config.layout_kind, g.label);
        const auto layout = core_periphery_layout(g.graph, c, df_ranks);
        auto n = open_out(out / ("layout_" + tag + "_nodes.tsv"), report.files);
        io::write_layout_nodes(n, layout);
        auto e = open_out(out / ("layout_" + tag + "_edges.tsv"), report.files);
        io::write_layout_edges(e, layout);
        try {
          const auto members = roster_for_graph(g.graph, roster, config.absent);
          const auto x = regularized_ranks(members, roster_values(c, members));
          const auto y = regularized_ranks(members, roster_values(*scores, members, TraitField::df));
          auto s = open_out(out / ("scatter_" + tag + ".tsv"), report.files);
          io::write_scatter(s, scatter_series(x, y, config.pvalue));
        } catch (const std::domain_error&) {
          warn(g.label.tag() + ": constant ranks, no scatter data");
        } catch (const std::invalid_argument&) {
          warn(g.label.tag() + ": too few roster students for scatter data");
        }
      }
    } else if (scores) {
      warn("no roster students or cumulative graphs; correlation skipped");
    }

    manifest["status"] = "ok";
    write_manifest();
    return report;
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    write_manifest();
    std::ofstream failed(out / "FAILED");
    failed << e.what() << '\n';
    throw;
  }
}

}  // namespace conet
