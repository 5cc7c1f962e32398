#include "conet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace conet::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& [u, v] : g.sorted_edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in, const std::string& source_name) {
  std::vector<NamedEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string u, v, extra;
    if (!(fields >> u >> v) || (fields >> extra)) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": expected 'u v'");
    }
    if (u == v) throw DataError(source_name + ":" + std::to_string(line_no) + ": self-loop");
    edges.emplace_back(std::move(u), std::move(v));
  }
  return Graph::from_edges(edges);
}

void write_graph_json(std::ostream& out, const CoOccurrenceGraph& g) {
  nlohmann::json j;
  j["label"] = {{"from", g.label.from}, {"to", g.label.to}, {"cumulative", g.label.cumulative}};
  j["threshold"] = g.threshold;
  j["nodes"] = g.graph.nodes();
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : g.graph.sorted_edges()) edges.push_back({u, v});
  out << j.dump(1) << '\n';
}

CoOccurrenceGraph read_graph_json(std::istream& in, const std::string& source_name) {
  try {
    const auto j = nlohmann::json::parse(in);
    CoOccurrenceGraph g;
    const auto& label = j.at("label");
    g.label = {label.at("from").get<int>(), label.at("to").get<int>(), label.at("cumulative").get<bool>()};
    g.threshold = j.at("threshold").get<Seconds>();
    std::vector<NamedEdge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    g.graph = Graph::from_edges(edges);
    const auto nodes = j.at("nodes").get<std::vector<std::string>>();
    if (nodes != g.graph.nodes()) {
      throw DataError(source_name + ": node list disagrees with edges (isolated or missing nodes)");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source_name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(source_name + ": " + e.what());
  }
}

CoOccurrenceGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph '" + path.string() + "'");
  if (path.extension() == ".json") return read_graph_json(in, path.string());
  CoOccurrenceGraph g;
  g.graph = read_edge_list(in, path.string());
  return g;
}

void write_graph_files(const std::filesystem::path& dir, const CoOccurrenceGraph& g) {
  std::filesystem::create_directories(dir);
  const auto tag = g.label.tag();
  auto edges = open_out(dir / (tag + ".edges"));
  write_edge_list(edges, g.graph);
  auto json = open_out(dir / (tag + ".json"));
  write_graph_json(json, g);
}

void write_witnesses(std::ostream& out, std::span<const CoOccurrenceGraph> graphs) {
  out << "window\tu\tv\tlocation\tday\tt_u\tt_v\tgap\n";
  for (const auto& g : graphs) {
    for (const auto& w : g.witnesses) {
      out << g.label.tag() << '\t' << w.u << '\t' << w.v << '\t' << w.location << '\t' << w.day
          << '\t' << w.t_u << '\t' << w.t_v << '\t' << w.gap() << '\n';
    }
  }
}

void write_ingest_manifest(std::ostream& out, const IngestReport& report,
                           const WeekPartition& partition, const EventLog& log) {
  out << "scope\tkey\tcount\n";
  out << "total\tinput_lines\t" << report.input_lines << '\n';
  out << "total\taccepted\t" << report.accepted << '\n';
  out << "total\trejected\t" << report.rejected.size() - report.duplicates << '\n';
  out << "total\tduplicates\t" << report.duplicates << '\n';
  out << "total\texcluded_week_records\t" << partition.excluded << '\n';
  out << "total\toutside_calendar\t" << partition.rejected << '\n';
  for (const auto& s : log.students()) {
    std::size_t count = 0;
    for (const auto& r : log.records()) count += r.student == s ? 1 : 0;
    out << "student\t" << s << '\t' << count << '\n';
  }
  for (const auto& w : partition.weeks) {
    out << "week\t" << w.label << "(raw " << w.raw_week << ")\t" << w.events.size() << '\n';
  }
  for (const auto& r : report.rejected) {
    out << "rejected\t" << r.source << ':' << r.line << '\t' << r.reason << '\n';
  }
}

void write_topology(std::ostream& out, std::span<const TopologySummary> rows) {
  out << "window\tfrom\tto\tnodes\tedges\taverage_degree\taverage_clustering\n";
  for (const auto& r : rows) {
    out << r.label.tag() << '\t' << r.label.from << '\t' << r.label.to << '\t' << r.node_count << '\t'
        << r.edge_count << '\t' << number(r.average_degree) << '\t'
        << (r.average_clustering ? number(*r.average_clustering) : "NA") << '\n';
  }
}

void write_node_metrics(std::ostream& out, const Graph& g, std::span<const CentralityVector> measures,
                        bool with_clustering) {
  out << "node_id";
  for (const auto& m : measures) out << '\t' << short_name(m.kind);
  if (with_clustering) out << "\tclustering";
  out << '\n';
  double clustering_sum = 0.0;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    out << g.name(v);
    for (const auto& m : measures) out << '\t' << number(m.scores(static_cast<Eigen::Index>(v)));
    if (with_clustering) {
      const double c = local_clustering(g, v);
      clustering_sum += c;
      out << '\t' << number(c);
    }
    out << '\n';
  }
  out << "#summary";
  for (const auto& m : measures) out << '\t' << (g.empty() ? "NA" : number(m.scores.mean()));
  if (with_clustering) {
    out << '\t' << (g.empty() ? "NA" : number(clustering_sum / static_cast<double>(g.node_count())));
  }
  out << '\n';
}

void write_null_ensemble(std::ostream& out, const NullEnsembleResult& result, double actual) {
  out << "replicate\tclustering\n";
  for (std::size_t i = 0; i < result.clustering.size(); ++i) {
    out << i << '\t' << number(result.clustering[i]) << '\n';
  }
  out << "#summary\tmean=" << number(result.mean) << "\tsd=" << number(result.sd)
      << "\tactual=" << number(actual) << "\tattempts=" << result.attempts
      << "\taccepted=" << result.accepted << "\tsaturated=" << result.saturated << '\n';
}

void write_correlation_records(std::ostream& out, const CorrelationTable& table) {
  out << "week\tcentrality\ttrait\tn\trho\tp_value\tstars\n";
  for (const auto& c : table.cells) {
    out << c.week << '\t' << short_name(c.kind) << '\t' << short_name(c.field) << '\t' << c.n << '\t'
        << (c.rho ? number(*c.rho) : "NA") << '\t' << number(c.p_value) << '\t' << c.stars << '\n';
  }
}

void write_correlation_table(std::ostream& out, const CorrelationTable& table) {
  constexpr int kCell = 10;
  out << std::left << std::setw(4) << "W";
  for (auto kind : table.kinds) {
    std::string name(short_name(kind));
    for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out << "| " << std::setw(kCell * 3) << name;
  }
  out << '\n' << std::setw(4) << "";
  for (std::size_t k = 0; k < table.kinds.size(); ++k) {
    out << "| ";
    for (auto f : table.fields) out << std::setw(kCell) << short_name(f);
  }
  out << '\n';
  for (int week : table.weeks) {
    out << std::setw(4) << week;
    for (auto kind : table.kinds) {
      out << "| ";
      for (auto f : table.fields) {
        const auto& c = table.at(week, kind, f);
        out << std::setw(kCell) << (c.rho ? fixed3(*c.rho) + c.stars : std::string("NA"));
      }
    }
    out << '\n';
  }
  out << "Significance: * P < 0.1, ** P < 0.05, *** P < 0.01\n";
}

void write_layout_nodes(std::ostream& out, const LayoutResult& layout) {
  out << "id\tradius\tangle\tcolor_value\tsize_value\n";
  for (const auto& n : layout.nodes) {
    out << n.id << '\t' << number(n.radius) << '\t' << number(n.angle) << '\t' << number(n.color_value)
        << '\t' << (n.size_value ? number(*n.size_value) : "NA") << '\n';
  }
}

void write_layout_edges(std::ostream& out, const LayoutResult& layout) {
  out << "u\tv\n";
  for (const auto& [u, v] : layout.edges) out << u << '\t' << v << '\n';
}

void write_scatter(std::ostream& out, const ScatterSeries& scatter) {
  out << "id\tx\ty\n";
  for (const auto& p : scatter.points) out << p.id << '\t' << number(p.x) << '\t' << number(p.y) << '\n';
  if (scatter.annotation) {
    out << "#rho\t" << number(scatter.annotation->rho) << "\tp\t" << number(scatter.annotation->p)
        << "\tn\t" << scatter.annotation->n << '\n';
  } else {
    out << "#rho\tNA\tp\tNA\tn\t" << scatter.points.size() << '\n';
  }
}

ScatterSeries read_scatter(std::istream& in) {
  ScatterSeries s;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream fields(line);
    std::string id, tag;
    if (line.rfind("#rho", 0) == 0) {
      std::string rho, p, n;
      fields >> tag >> rho >> tag >> p >> tag >> n;
      if (rho != "NA") s.annotation = SpearmanTest{std::stod(rho), std::stod(p), std::stoul(n)};
      continue;
    }
    ScatterPoint pt;
    std::string x, y;
    if (!(fields >> pt.id >> x >> y)) throw DataError("malformed scatter row: " + line);
    pt.x = std::stod(x);
    pt.y = std::stod(y);
    s.points.push_back(std::move(pt));
  }
  return s;
}

std::vector<std::string> read_roster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open roster '" + path.string() + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id) || id == "student" || id.front() == '#') continue;
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace conet::io
