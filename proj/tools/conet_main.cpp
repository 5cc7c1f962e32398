// conet: co-occurrence network analysis of dining check-in logs.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "conet/cooccur.hpp"
#include "conet/ingest.hpp"
#include "conet/io.hpp"
#include "conet/layout.hpp"
#include "conet/metrics.hpp"
#include "conet/nullmodel.hpp"
#include "conet/pipeline.hpp"
#include "conet/stats.hpp"
#include "conet/synthgen.hpp"

namespace fs = std::filesystem;
using namespace conet;

namespace {

struct CalendarFlags {
  std::string input;
  std::string format = "per-student";
  std::string study_start = "2013-01-06";
  std::string exclude_weeks;
  Seconds tz_offset = kDefaultTzOffset;
  std::optional<int> weeks;

  void add(CLI::App* app, const std::string& weeks_flag = "--weeks") {
    app->add_option("--input", input, "Check-in file or directory")->required();
    app->add_option("--format", format, "per-student | single-file")->capture_default_str();
    app->add_option("--study-start", study_start, "First day of week 1 (YYYY-MM-DD)")->capture_default_str();
    app->add_option("--exclude-weeks", exclude_weeks, "Raw week indices to drop, e.g. 11 or 3,11-12");
    app->add_option("--tz-offset", tz_offset, "Local offset from UTC in seconds")->capture_default_str();
    app->add_option(weeks_flag, weeks, "Raw weeks in the study (default: up to the last event)");
  }

  StudyCalendar calendar() const {
    return StudyCalendar(parse_date(study_start), tz_offset, parse_int_list(exclude_weeks), weeks);
  }

  ParsedLog parse() const { return parse_checkins(input, parse_ingest_format(format), calendar()); }
};

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

/// Writes to `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
  } else {
    auto out = open_file(path);
    fn(out);
  }
}

std::pair<int, int> parse_week_range(const std::string& text, int last) {
  if (text == "all") return {1, last};
  const auto set = parse_int_list(text);
  if (set.empty()) throw std::invalid_argument("empty week range");
  return {*set.begin(), *set.rbegin()};
}

std::vector<std::string> roster_for(const std::string& roster_path, const TraitScores& scores) {
  return roster_path.empty() ? scores.students() : io::read_roster(roster_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-occurrence networks from dining check-ins"};
  app.require_subcommand(1);

  // ingest
  CalendarFlags ingest_cal;
  std::string ingest_out, ingest_manifest;
  auto* ingest = app.add_subcommand("ingest", "Parse and validate check-in logs");
  ingest_cal.add(ingest);
  ingest->add_option("--out", ingest_out, "Write accepted events as a single-file log");
  ingest->add_option("--manifest", ingest_manifest, "Manifest path (default stdout)");

  // synth
  std::string synth_spec, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  synth->add_option("--spec", synth_spec, "Cohort spec (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  // build
  CalendarFlags build_cal;
  std::string build_weeks = "all", build_out = "graphs", build_witnesses;
  std::optional<int> build_cumulative;
  Seconds build_threshold = kDefaultThreshold;
  auto* build = app.add_subcommand("build", "Build weekly and cumulative co-occurrence graphs");
  build_cal.add(build, "--study-weeks");
  build->add_option("--weeks", build_weeks, "all | <from>-<to> (week labels)")->capture_default_str();
  build->add_option("--cumulative-from", build_cumulative, "Also build cumulative graphs from this week");
  build->add_option("--threshold", build_threshold, "Co-occurrence threshold in seconds")->capture_default_str();
  build->add_option("--out", build_out, "Output directory")->capture_default_str();
  build->add_option("--witnesses", build_witnesses, "Write one witness record per edge");

  // metrics
  std::string metrics_graph, metrics_measures = "dc,cc,bc,clustering", metrics_out, metrics_rule = "zero";
  auto* metrics = app.add_subcommand("metrics", "Per-node centrality and clustering");
  metrics->add_option("--graph", metrics_graph, "Graph file (.edges or .json)")->required();
  metrics->add_option("--measures", metrics_measures, "Subset of dc,cc,bc,clustering")->capture_default_str();
  metrics->add_option("--clustering-rule", metrics_rule, "zero | exclude (degree < 2 nodes)")->capture_default_str();
  metrics->add_option("--out", metrics_out, "Output path (default stdout)");

  // nullmodel
  std::string null_graph, null_out, null_counting = "accepted", null_pairing = "uniform";
  NullModelConfig null_cfg;
  auto* nullmodel = app.add_subcommand("nullmodel", "Degree-preserving null-model clustering baseline");
  nullmodel->add_option("--graph", null_graph, "Graph file (.edges or .json)")->required();
  nullmodel->add_option("--replicates", null_cfg.replicate_count, "Null graphs")->capture_default_str();
  nullmodel->add_option("--multiplier", null_cfg.swap_rounds_multiplier, "Swap rounds per edge")->capture_default_str();
  nullmodel->add_option("--seed", null_cfg.master_seed, "Master seed")->capture_default_str();
  nullmodel->add_option("--max-attempts", null_cfg.max_attempts_per_round, "Attempt budget per required swap")->capture_default_str();
  nullmodel->add_option("--swap-counting", null_counting, "accepted | attempts")->capture_default_str();
  nullmodel->add_option("--pairing", null_pairing, "uniform | cross")->capture_default_str();
  nullmodel->add_option("--threads", null_cfg.threads, "Worker threads")->capture_default_str();
  nullmodel->add_option("--out", null_out, "Output path (default stdout)");

  // correlate
  std::string corr_graphs, corr_scores, corr_kinds = "dc,cc,bc", corr_roster, corr_out, corr_pvalue = "auto",
              corr_absent = "zero";
  auto* correlate = app.add_subcommand("correlate", "Spearman correlation of centrality with trait scores");
  correlate->add_option("--graphs", corr_graphs, "Directory holding cumulative_*.json graphs")->required();
  correlate->add_option("--scores", corr_scores, "Scores file (student, F1, F2)")->required();
  correlate->add_option("--kinds", corr_kinds, "Subset of dc,cc,bc")->capture_default_str();
  correlate->add_option("--roster", corr_roster, "Students to correlate (default: all scored)");
  correlate->add_option("--pvalue", corr_pvalue, "auto | exact | t | monte-carlo")->capture_default_str();
  correlate->add_option("--absent", corr_absent, "zero | drop: roster students missing from a graph")
      ->capture_default_str();
  correlate->add_option("--out", corr_out, "Machine-readable records path");

  // layout
  std::string layout_graph, layout_kind = "dc", layout_scores, layout_roster, layout_out = "layout",
              layout_absent = "zero";
  auto* layout = app.add_subcommand("layout", "Core-periphery layout and scatter data");
  layout->add_option("--graph", layout_graph, "Graph file (.edges or .json)")->required();
  layout->add_option("--centrality", layout_kind, "dc | cc | bc")->capture_default_str();
  layout->add_option("--scores", layout_scores, "Scores file (student, F1, F2)")->required();
  layout->add_option("--roster", layout_roster, "Students for scatter data (default: all scored)");
  layout->add_option("--absent", layout_absent, "zero | drop: roster students missing from the graph")
      ->capture_default_str();
  layout->add_option("--out", layout_out, "Output directory")->capture_default_str();

  // run
  std::string run_config;
  auto* run = app.add_subcommand("run", "Full pipeline from one config file");
  run->add_option("--config", run_config, "Pipeline config (JSON)")->required();
  // Every config key doubles as a flag; flags win over the file.
  std::map<std::string, std::string> run_overrides;
  for (auto key : pipeline_config_keys()) {
    const std::string name(key);
    run->add_option_function<std::string>(
        "--" + name, [&run_overrides, name](const std::string& v) { run_overrides[name] = v; },
        "Overrides '" + name + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      const auto parsed = ingest_cal.parse();
      const auto partition = partition_weeks(parsed.log);
      emit(ingest_manifest, [&](std::ostream& o) {
        io::write_ingest_manifest(o, parsed.report, partition, parsed.log);
      });
      if (!ingest_out.empty()) {
        auto o = open_file(ingest_out);
        write_events(o, parsed.log);
      }
      if (parsed.report.duplicates > 0) {
        std::cerr << "warning: " << parsed.report.duplicates << " duplicate records dropped\n";
      }
    } else if (*synth) {
      const auto spec = load_cohort_spec(synth_spec);
      write_cohort(generate_cohort(spec), spec, synth_out);
    } else if (*build) {
      const auto parsed = build_cal.parse();
      const auto partition = partition_weeks(parsed.log);
      const int last = static_cast<int>(partition.weeks.size());
      const auto [from, to] = parse_week_range(build_weeks, last);
      std::vector<CoOccurrenceGraph> built;
      const bool witnesses = !build_witnesses.empty();
      for (const auto& slice : partition.weeks) {
        if (slice.label < from || slice.label > to) continue;
        built.push_back(build_week_graph(slice, build_threshold, witnesses));
      }
      if (build_cumulative) {
        for (int w = *build_cumulative; w <= to; ++w) {
          built.push_back(build_cumulative_graph(parsed.log, *build_cumulative, w, build_threshold, witnesses));
        }
      }
      for (const auto& g : built) io::write_graph_files(build_out, g);
      if (witnesses) {
        auto o = open_file(build_witnesses);
        io::write_witnesses(o, built);
      }
      std::cout << "wrote " << built.size() << " graphs to " << build_out << '\n';
    } else if (*metrics) {
      const auto g = io::read_graph(metrics_graph);
      std::vector<CentralityVector> measures;
      bool clustering = false;
      for (std::string_view rest = metrics_measures; !rest.empty();) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        if (item == "clustering") clustering = true;
        else if (!item.empty()) measures.push_back(centrality(g.graph, parse_centrality_kind(item), g.label));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      const auto rule = metrics_rule == "exclude" ? LowDegreeRule::exclude : LowDegreeRule::count_as_zero;
      emit(metrics_out, [&](std::ostream& o) {
        io::write_node_metrics(o, g.graph, measures, clustering);
        if (clustering && !g.graph.empty()) {
          o << "#average_clustering\t" << io::number(average_clustering(g.graph, rule)) << '\n';
        }
      });
    } else if (*nullmodel) {
      const auto g = io::read_graph(null_graph);
      if (null_counting != "accepted" && null_counting != "attempts") {
        throw std::invalid_argument("--swap-counting must be accepted or attempts");
      }
      if (null_pairing != "uniform" && null_pairing != "cross") {
        throw std::invalid_argument("--pairing must be uniform or cross");
      }
      null_cfg.counting = null_counting == "accepted" ? SwapCounting::accepted : SwapCounting::attempts;
      null_cfg.pairing = null_pairing == "uniform" ? PairingRule::uniform : PairingRule::cross;
      const auto ens = null_clustering_baseline(g.graph, null_cfg, g.label);
      emit(null_out, [&](std::ostream& o) {
        io::write_null_ensemble(o, ens, average_clustering(g.graph));
      });
    } else if (*correlate) {
      const auto scores = TraitScores::load(corr_scores);
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(corr_graphs)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("cumulative_", 0) == 0 && entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw DataError("no cumulative_*.json graphs in '" + corr_graphs + "'");
      std::vector<CoOccurrenceGraph> graphs;
      for (const auto& f : files) graphs.push_back(io::read_graph(f));
      std::sort(graphs.begin(), graphs.end(), [](const auto& a, const auto& b) { return a.label.to < b.label.to; });
      const auto roster = roster_for(corr_roster, scores);
      const auto kinds = parse_centrality_kinds(corr_kinds);
      const auto table = correlation_table(graphs, scores, roster, kinds, {parse_pvalue_method(corr_pvalue), 0, parse_absent_rule(corr_absent)});
      io::write_correlation_table(std::cout, table);
      if (!corr_out.empty()) {
        auto o = open_file(corr_out);
        io::write_correlation_records(o, table);
      }
    } else if (*layout) {
      const auto g = io::read_graph(layout_graph);
      const auto scores = TraitScores::load(layout_scores);
      const auto roster = roster_for(layout_roster, scores);
      const auto kind = parse_centrality_kind(layout_kind);
      const auto c = centrality(g.graph, kind, g.label);
      const Eigen::VectorXd df = roster_values(scores, roster, TraitField::df);
      const Eigen::VectorXd df_rank = rank_with_ties(df);
      std::map<std::string, double> ranks;
      for (std::size_t i = 0; i < roster.size(); ++i) ranks[roster[i]] = df_rank(static_cast<Eigen::Index>(i));
      const auto result = core_periphery_layout(g.graph, c, ranks);
      fs::create_directories(layout_out);
      auto nodes = open_file(fs::path(layout_out) / "nodes.tsv");
      io::write_layout_nodes(nodes, result);
      auto edges = open_file(fs::path(layout_out) / "edges.tsv");
      io::write_layout_edges(edges, result);
      const auto members = roster_for_graph(g.graph, roster, parse_absent_rule(layout_absent));
      const auto scatter = scatter_series(regularized_ranks(members, roster_values(c, members)),
                                          regularized_ranks(members, roster_values(scores, members, TraitField::df)));
      auto sc = open_file(fs::path(layout_out) / "scatter.tsv");
      io::write_scatter(sc, scatter);
    } else if (*run) {
      const auto config = apply_config_overrides(load_pipeline_config(run_config), run_overrides);
      const auto report = run_pipeline(config);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "report written to " << config.out.string() << '\n';
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
