#pragma once

#include <iosfwd>
#include <string>

#include "spiky/graph.hpp"

namespace spiky {

struct MetricReport;

enum class Delimiter { whitespace, comma };

struct EdgeListFormat {
    Delimiter delimiter = Delimiter::whitespace;
    bool weighted = false;
    char comment_prefix = '#';
};

struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
};

// Shortest round-trip decimal representation (locale independent); the
// backbone of byte-deterministic output files.
std::string format_double(double x);

// Reads "label label [weight]" lines.  Arbitrary string labels are mapped to
// dense ids in order of first appearance.  A "<prefix> nodes N" comment pads
// the graph with isolated nodes up to N, which is how written files round-trip
// exactly.  Duplicate edges merge by summing weights; self-loops are dropped.
Graph load_edge_list(std::istream& in, const EdgeListFormat& fmt = {},
                     LoadStats* stats = nullptr);
Graph load_edge_list_file(const std::string& path, const EdgeListFormat& fmt = {},
                          LoadStats* stats = nullptr);

// Emits a "<prefix> nodes N" header, then one line per undirected edge,
// lower-id endpoint first, sorted; weight column only when fmt.weighted.
void write_edge_list(const Graph& g, std::ostream& out, const EdgeListFormat& fmt = {});
void write_edge_list_file(const Graph& g, const std::string& path,
                          const EdgeListFormat& fmt = {});

// "metric,value" rows in the report's canonical (sorted) key order.
void write_metrics_csv(const MetricReport& report, std::ostream& out);

// "degree,count" rows ascending by degree.
void write_histogram_csv(const DegreeHistogram& hist, std::ostream& out);

}  // namespace spiky
