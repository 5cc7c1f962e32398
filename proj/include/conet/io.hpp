#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "conet/cooccur.hpp"
#include "conet/ingest.hpp"
#include "conet/layout.hpp"
#include "conet/metrics.hpp"
#include "conet/nullmodel.hpp"
#include "conet/stats.hpp"

namespace conet::io {

/// Full-precision decimal for machine-readable output; "NA" for NaN.
std::string number(double v);

/// One "u v" line per edge, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in, const std::string& source_name = "edges");

/// {"label": {...}, "threshold": T, "nodes": [...], "edges": [[u, v], ...]}
void write_graph_json(std::ostream& out, const CoOccurrenceGraph& g);
CoOccurrenceGraph read_graph_json(std::istream& in, const std::string& source_name = "graph");

/// Dispatches on extension: ".json" is a graph description, anything else an
/// edge list (with a default label).
CoOccurrenceGraph read_graph(const std::filesystem::path& path);
/// Writes <dir>/<tag>.edges and <dir>/<tag>.json.
void write_graph_files(const std::filesystem::path& dir, const CoOccurrenceGraph& g);

void write_witnesses(std::ostream& out, std::span<const CoOccurrenceGraph> graphs);

void write_ingest_manifest(std::ostream& out, const IngestReport& report,
                           const WeekPartition& partition, const EventLog& log);

void write_topology(std::ostream& out, std::span<const TopologySummary> rows);

/// node_id, then one column per requested measure; a trailing "#summary" row
/// carries means (and average clustering when requested).
void write_node_metrics(std::ostream& out, const Graph& g, std::span<const CentralityVector> measures,
                        bool with_clustering);

void write_null_ensemble(std::ostream& out, const NullEnsembleResult& result, double actual);

void write_correlation_records(std::ostream& out, const CorrelationTable& table);
/// Week rows, one column group per kind, F1/F2/dF columns, rho to three
/// decimals with stars.
void write_correlation_table(std::ostream& out, const CorrelationTable& table);

void write_layout_nodes(std::ostream& out, const LayoutResult& layout);
void write_layout_edges(std::ostream& out, const LayoutResult& layout);
void write_scatter(std::ostream& out, const ScatterSeries& scatter);

/// Reads the scatter table back (for round-trip checks).
ScatterSeries read_scatter(std::istream& in);

/// One id per line; blank lines and a "student" header are skipped.
std::vector<std::string> read_roster(const std::filesystem::path& path);

}  // namespace conet::io
