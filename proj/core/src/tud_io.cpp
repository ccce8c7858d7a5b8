#include "ggmeval/tud_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "ggmeval/common.hpp"

namespace ggmeval {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Iterates non-blank lines, passing (line_number, content).
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      fn(line_no, line);
    }
    pos = end + 1;
  }
}

[[noreturn]] void format_error(const fs::path& file, std::size_t line_no,
                               const std::string& what) {
  throw FormatError(file.filename().string() + ":" + std::to_string(line_no) +
                    ": " + what);
}

// Parses comma/space separated integers from one line.
template <typename Int>
std::vector<Int> parse_ints(std::string_view line, const fs::path& file,
                            std::size_t line_no) {
  std::vector<Int> out;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == ',')) ++p;
    if (p == end) break;
    Int value{};
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc()) format_error(file, line_no, "expected integer");
    out.push_back(value);
    p = next;
  }
  return out;
}

}  // namespace

GraphSet load_tud_dataset(const fs::path& dir, const std::string& name,
                          LoadReport* report) {
  LoadReport local_report;
  LoadReport& rep = report ? *report : local_report;
  rep = LoadReport{};

  if (!fs::is_directory(dir)) {
    throw LoadError("dataset directory not found: " + dir.string());
  }
  const fs::path adj_path = dir / (name + "_A.txt");
  const fs::path ind_path = dir / (name + "_graph_indicator.txt");
  const fs::path nlab_path = dir / (name + "_node_labels.txt");
  const fs::path glab_path = dir / (name + "_graph_labels.txt");
  for (const fs::path& p : {adj_path, ind_path}) {
    if (!fs::exists(p)) throw LoadError("missing file " + p.string());
  }

  // Node -> graph mapping.
  std::vector<std::int64_t> node_graph_id;
  for_each_line(read_file(ind_path), [&](std::size_t ln, std::string_view l) {
    auto v = parse_ints<std::int64_t>(l, ind_path, ln);
    if (v.size() != 1) format_error(ind_path, ln, "expected one graph id");
    node_graph_id.push_back(v[0]);
  });
  std::vector<std::int64_t> graph_ids = node_graph_id;
  std::sort(graph_ids.begin(), graph_ids.end());
  graph_ids.erase(std::unique(graph_ids.begin(), graph_ids.end()),
                  graph_ids.end());
  std::unordered_map<std::int64_t, std::size_t> graph_index;
  for (std::size_t i = 0; i < graph_ids.size(); ++i) {
    graph_index[graph_ids[i]] = i;
  }
  const std::size_t num_graphs = graph_ids.size();
  std::vector<std::size_t> node_graph(node_graph_id.size());
  std::vector<NodeId> node_local(node_graph_id.size());
  std::vector<std::size_t> graph_sizes(num_graphs, 0);
  for (std::size_t n = 0; n < node_graph_id.size(); ++n) {
    const std::size_t g = graph_index.at(node_graph_id[n]);
    node_graph[n] = g;
    node_local[n] = static_cast<NodeId>(graph_sizes[g]++);
  }

  // Edges as directed keys per graph.
  std::vector<std::vector<std::uint64_t>> directed(num_graphs);
  const std::size_t total_nodes = node_graph.size();
  for_each_line(read_file(adj_path), [&](std::size_t ln, std::string_view l) {
    auto v = parse_ints<std::int64_t>(l, adj_path, ln);
    if (v.size() != 2) format_error(adj_path, ln, "expected two node ids");
    for (std::int64_t node : v) {
      if (node < 1 || static_cast<std::size_t>(node) > total_nodes) {
        format_error(adj_path, ln,
                     "node " + std::to_string(node) +
                         " references unknown graph id (not in indicator)");
      }
    }
    const std::size_t a = static_cast<std::size_t>(v[0] - 1);
    const std::size_t b = static_cast<std::size_t>(v[1] - 1);
    if (node_graph[a] != node_graph[b]) {
      format_error(adj_path, ln, "edge joins nodes of different graphs");
    }
    if (a == b) {
      ++rep.self_loops_dropped;
      return;
    }
    directed[node_graph[a]].push_back(
        (static_cast<std::uint64_t>(node_local[a]) << 32) | node_local[b]);
  });

  std::optional<std::vector<int>> all_labels;
  if (fs::exists(nlab_path)) {
    std::vector<int> labels;
    labels.reserve(total_nodes);
    for_each_line(read_file(nlab_path), [&](std::size_t ln, std::string_view l) {
      auto v = parse_ints<int>(l, nlab_path, ln);
      if (v.empty()) format_error(nlab_path, ln, "expected a label");
      labels.push_back(v[0]);
    });
    if (labels.size() != total_nodes) {
      throw FormatError(nlab_path.filename().string() + ": " +
                        std::to_string(labels.size()) + " labels for " +
                        std::to_string(total_nodes) + " nodes");
    }
    all_labels = std::move(labels);
    rep.node_labels_present = true;
  }
  if (fs::exists(glab_path)) {
    for_each_line(read_file(glab_path),
                  [&](std::size_t, std::string_view) { ++rep.graph_labels_read; });
  }

  std::vector<std::vector<int>> labels_per_graph(num_graphs);
  if (all_labels) {
    for (std::size_t n = 0; n < total_nodes; ++n) {
      labels_per_graph[node_graph[n]].push_back((*all_labels)[n]);
    }
  }

  GraphSet set;
  set.provenance = Provenance::real();
  set.graphs.reserve(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    auto& keys = directed[g];
    std::sort(keys.begin(), keys.end());
    const std::size_t before = keys.size();
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    rep.duplicate_entries_dropped += before - keys.size();
    std::vector<std::uint64_t> undirected;
    undirected.reserve(keys.size());
    for (std::uint64_t k : keys) {
      undirected.push_back(edge_key(static_cast<NodeId>(k >> 32),
                                    static_cast<NodeId>(k & 0xffffffffu)));
    }
    std::sort(undirected.begin(), undirected.end());
    undirected.erase(std::unique(undirected.begin(), undirected.end()),
                     undirected.end());
    std::vector<Edge> edges;
    edges.reserve(undirected.size());
    for (std::uint64_t k : undirected) {
      edges.push_back({static_cast<NodeId>(k >> 32),
                       static_cast<NodeId>(k & 0xffffffffu)});
    }
    std::optional<std::vector<int>> labels;
    if (all_labels) labels = std::move(labels_per_graph[g]);
    set.graphs.emplace_back(graph_ids[g], graph_sizes[g], std::move(edges),
                            std::nullopt, std::move(labels));
  }
  return set;
}

void write_tud_dataset(const GraphSet& set, const fs::path& dir,
                       const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create directory " + dir.string());
  }
  auto open = [&](const std::string& suffix) {
    fs::path p = dir / (name + suffix);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    return out;
  };
  const bool with_labels =
      !set.empty() && std::all_of(set.graphs.begin(), set.graphs.end(),
                                  [](const Graph& g) {
                                    return g.node_labels().has_value();
                                  });

  std::ofstream adj = open("_A.txt");
  std::ofstream ind = open("_graph_indicator.txt");
  std::ofstream lab;
  if (with_labels) lab = open("_node_labels.txt");

  std::size_t offset = 0;
  for (std::size_t gi = 0; gi < set.size(); ++gi) {
    const Graph& g = set[gi];
    const auto nbrs = g.adjacency_lists();
    for (std::size_t u = 0; u < nbrs.size(); ++u) {
      for (NodeId v : nbrs[u]) {
        adj << (offset + u + 1) << ", " << (offset + v + 1) << '\n';
      }
    }
    for (std::size_t u = 0; u < g.num_nodes(); ++u) {
      ind << (gi + 1) << '\n';
      if (with_labels) lab << (*g.node_labels())[u] << '\n';
    }
    offset += g.num_nodes();
  }
  for (std::ofstream* f : {&adj, &ind}) {
    f->flush();
    if (!*f) throw Error("write failed in " + dir.string());
  }
}

}  // namespace ggmeval
