#pragma once

#include <string>
#include <vector>

#include "comconceal/graph.hpp"

namespace comconceal {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);
double parse_double(const std::string& s, const std::string& context, long line_no);

// Edge list: one "u<TAB>v" per line, '#' starts a comment. A "# n=<count>"
// header is written on save and honored on load; without it n = max id + 1.
void save_edge_list(const Graph& g, const std::string& path);
Graph load_edge_list(const std::string& path);

// Features: CSV without header, row i = node i.
void save_features(const NodeFeatures& x, const std::string& path);
NodeFeatures load_features(const std::string& path);

// Partition: one "<node><TAB><label>" per line.
void save_partition(const Partition& p, const std::string& path);
Partition load_partition(const std::string& path);

struct FlexibleLoadResult {
  Graph graph;
  std::vector<std::string> id_map;  // new id -> original token
  long duplicates_collapsed = 0;
  long self_loops_dropped = 0;
};

// Tolerant loader for external data: accepts arbitrary string ids (mapped
// lexicographically), symmetrizes directed edges, collapses duplicates and
// drops self-loops, counting both.
FlexibleLoadResult load_edge_list_flexible(const std::string& path);

void save_id_map(const std::vector<std::string>& id_map, const std::string& path);

}  // namespace comconceal
