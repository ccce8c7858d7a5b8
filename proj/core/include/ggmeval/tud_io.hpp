#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "ggmeval/graph.hpp"

namespace ggmeval {

// Counters for entries the loader dropped or ignored.
struct LoadReport {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_entries_dropped = 0;  // repeated directed entries
  std::size_t graph_labels_read = 0;
  bool node_labels_present = false;
};

// Reads a TUDataset directory:
//   <name>_A.txt               "i, j" per line, 1-indexed global node ids
//   <name>_graph_indicator.txt line n = graph id of node n
//   <name>_node_labels.txt     optional, line n = integer label of node n
//   <name>_graph_labels.txt    optional, only counted
// Each undirected edge is listed in both directions in _A.txt; the loader
// keeps one copy. Graphs are returned in ascending graph-id order.
// Throws LoadError for missing mandatory files and FormatError (with line
// number) for malformed content.
GraphSet load_tud_dataset(const std::filesystem::path& dir,
                          const std::string& name,
                          LoadReport* report = nullptr);

// Writes a set in the same format (both edge directions, node labels when
// every graph carries them). Creates dir if needed.
void write_tud_dataset(const GraphSet& set, const std::filesystem::path& dir,
                       const std::string& name);

}  // namespace ggmeval
