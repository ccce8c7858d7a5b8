// ggm-eval: perturbation-sweep evaluation of graph generative-model metrics.
//
//   ggm-eval stats    --dataset-dir DIR --dataset-name NAME
//   ggm-eval synth    --graphs N --nodes MIN MAX --edge-prob MIN MAX --out-dir DIR
//   ggm-eval evaluate [dataset flags] --extractor gmae --perturbation mixing ...
//   ggm-eval plot     --report report.json --out violins.svg
//   ggm-eval --config run.toml evaluate   (options under an [evaluate] table)
//
// Exit codes: 0 success, 2 usage/config error, 1 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ggmeval/common.hpp"
#include "ggmeval/graph_ops.hpp"
#include "ggmeval/harness.hpp"
#include "ggmeval/plot.hpp"
#include "ggmeval/report.hpp"
#include "ggmeval/tud_io.hpp"

namespace fs = std::filesystem;
using namespace ggmeval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const LoadError*>(&e)) {
    return kExitUsage;
  }
  return kExitRuntime;
}

int fail(const std::string& stage, const std::exception& e) {
  std::cerr << "ggm-eval: " << stage << " failed: " << e.what() << '\n';
  return exit_code_for(e);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Dataset flags shared by stats and evaluate.
struct DatasetFlags {
  std::string dir;
  std::string name;
  std::size_t min_nodes = 0;
  std::size_t max_nodes = 0;
  CLI::Option* min_opt = nullptr;
  CLI::Option* max_opt = nullptr;

  // Synthetic corpus in place of a TUDataset directory.
  std::size_t synth_graphs = 0;
  std::pair<std::size_t, std::size_t> synth_nodes{30, 30};
  std::pair<double, double> synth_edge_prob{0.1, 0.1};
  std::uint64_t synth_seed = 0;

  void add_to(CLI::App& app, bool with_synthetic) {
    app.add_option("--dataset-dir", dir, "TUDataset directory");
    app.add_option("--dataset-name", name,
                   "TUDataset name (file prefix, e.g. PROTEINS)");
    min_opt = app.add_option("--min-nodes", min_nodes,
                             "Drop graphs with fewer nodes (preset: 20 for "
                             "PROTEINS, 3 otherwise)");
    max_opt = app.add_option("--max-nodes", max_nodes,
                             "Drop graphs with more nodes (preset: 1000)");
    if (with_synthetic) {
      app.add_option("--synth-graphs", synth_graphs,
                     "Use a synthetic E-R corpus of this many graphs");
      app.add_option("--synth-nodes", synth_nodes, "Node-count range MIN MAX");
      app.add_option("--synth-edge-prob", synth_edge_prob,
                     "Edge-probability range MIN MAX");
      app.add_option("--synth-seed", synth_seed, "Synthetic corpus seed");
    }
  }

  DatasetSource source() const {
    DatasetSource src;
    if (synth_graphs > 0) {
      SyntheticSpec spec;
      spec.num_graphs = synth_graphs;
      spec.min_nodes = synth_nodes.first;
      spec.max_nodes = synth_nodes.second;
      spec.min_edge_prob = synth_edge_prob.first;
      spec.max_edge_prob = synth_edge_prob.second;
      spec.seed = synth_seed;
      src.synthetic = spec;
      src.name = "synthetic";
      src.min_nodes = 1;
      src.max_nodes = std::numeric_limits<std::size_t>::max();
    } else {
      if (dir.empty() || name.empty()) {
        throw ConfigError("--dataset-dir and --dataset-name are required "
                          "(or --synth-graphs)");
      }
      src.dir = dir;
      src.name = name;
      const DatasetPreset preset = dataset_preset(name);
      src.min_nodes = preset.min_nodes;
      src.max_nodes = preset.max_nodes;
    }
    if (min_opt->count() > 0) src.min_nodes = min_nodes;
    if (max_opt->count() > 0) src.max_nodes = max_nodes;
    return src;
  }
};

GraphSet load_dataset(const DatasetSource& src) {
  GraphSet set;
  if (src.synthetic) {
    set = synthetic_er_corpus(*src.synthetic);
  } else {
    LoadReport report;
    set = load_tud_dataset(src.dir, src.name, &report);
    if (report.self_loops_dropped > 0 || report.duplicate_entries_dropped > 0) {
      std::cerr << "warning: dropped " << report.self_loops_dropped
                << " self-loops and " << report.duplicate_entries_dropped
                << " duplicate edge entries\n";
    }
  }
  return filter_by_size(set, src.min_nodes, src.max_nodes);
}

int cmd_stats(const DatasetFlags& flags) {
  DatasetSource src;
  GraphSet set;
  try {
    src = flags.source();
    set = load_dataset(src);
  } catch (const std::exception& e) {
    return fail("load", e);
  }
  const DatasetStats s = compute_stats(set);
  std::printf("%-20s %10s %10s %10s %10s %10s %10s %10s\n", "dataset",
              "graphs", "mean_nodes", "min_nodes", "max_nodes", "mean_edges",
              "min_edges", "max_edges");
  std::printf("%-20s %10zu %10.1f %10zu %10zu %10.1f %10zu %10zu\n",
              src.name.c_str(), s.num_graphs, s.mean_nodes, s.min_nodes,
              s.max_nodes, s.mean_edges, s.min_edges, s.max_edges);
  return kExitOk;
}

struct SynthFlags {
  std::size_t graphs = 10;
  std::pair<std::size_t, std::size_t> nodes{10, 30};
  std::pair<double, double> edge_prob{0.1, 0.3};
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string name = "SYNTH";
};

int cmd_synth(const SynthFlags& f) {
  GraphSet set;
  try {
    SyntheticSpec spec;
    spec.num_graphs = f.graphs;
    spec.min_nodes = f.nodes.first;
    spec.max_nodes = f.nodes.second;
    spec.min_edge_prob = f.edge_prob.first;
    spec.max_edge_prob = f.edge_prob.second;
    spec.seed = f.seed;
    set = synthetic_er_corpus(spec);
  } catch (const std::exception& e) {
    return fail("synth", e);
  }
  try {
    write_tud_dataset(set, f.out_dir, f.name);
  } catch (const std::exception& e) {
    std::cerr << "ggm-eval: write failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::cout << "wrote " << set.size() << " graphs to "
            << (fs::path(f.out_dir) / f.name).string() << "_*.txt\n";
  return kExitOk;
}

struct EvaluateFlags {
  DatasetFlags dataset;
  std::size_t sample_size = 1000;
  std::string extractor = "gmae";
  std::vector<std::string> perturbations;
  std::string metrics = "fd,mmd-linear,mmd-rbf,precision,recall,f1-pr,density,coverage,f1-dc";
  double step = 0.01;
  std::size_t runs = 5;
  std::size_t clusters = 10;
  std::size_t knn_k = 5;
  std::uint64_t seed = 0;
  std::string out = "report.json";
  std::string csv;
  std::size_t workers = 0;
  std::size_t hidden_dim = 32;
  std::size_t layers = 2;
  std::size_t epochs = 30;
  double mask_rate = 0.2;
  double learning_rate = 1e-3;
  double sce_gamma = 2.0;
  double rbf_sigma = 0.0;
  double mixing_edge_prob = -1.0;
  std::string load_model;
  std::string save_models;
};

RunConfig build_run_config(const EvaluateFlags& f) {
  RunConfig rc;
  rc.dataset = f.dataset.source();
  ExperimentConfig& ex = rc.experiment;
  auto kind = parse_extractor_kind(f.extractor);
  if (!kind) throw ConfigError("unknown extractor '" + f.extractor + "'");
  ex.extractor.kind = *kind;
  ex.extractor.hidden_dim = f.hidden_dim;
  ex.extractor.num_layers = f.layers;
  ex.extractor.gmae.hidden_dim = f.hidden_dim;
  ex.extractor.gmae.num_layers = f.layers;
  ex.extractor.gmae.epochs = f.epochs;
  ex.extractor.gmae.mask_rate = f.mask_rate;
  ex.extractor.gmae.learning_rate = f.learning_rate;
  ex.extractor.gmae.sce_gamma = f.sce_gamma;
  ex.extractor.gmae.validate();
  if (f.layers < 1 || f.hidden_dim < 1) throw ConfigError("layers and hidden dim must be >= 1");

  ex.kinds.clear();
  for (const std::string& p : f.perturbations) {
    auto k = parse_perturbation_kind(p);
    if (!k) throw ConfigError("unknown perturbation '" + p + "'");
    ex.kinds.push_back(*k);
  }
  if (ex.kinds.empty()) {
    ex.kinds.assign(std::begin(kAllPerturbationKinds), std::end(kAllPerturbationKinds));
  }

  ex.metrics.metrics.clear();
  for (const std::string& name : split_list(f.metrics)) {
    auto m = parse_metric(name);
    if (!m) throw ConfigError("unknown metric '" + name + "'");
    ex.metrics.metrics.push_back(*m);
  }
  if (ex.metrics.metrics.empty()) throw ConfigError("empty metric list");
  ex.metrics.knn.k = f.knn_k;
  if (f.knn_k < 1) throw ConfigError("--knn-k must be >= 1");
  if (f.rbf_sigma > 0.0) ex.metrics.rbf_sigma = f.rbf_sigma;

  if (!(f.step > 0.0 && f.step <= 1.0)) throw ConfigError("--step must lie in (0, 1]");
  ex.sweep.step = f.step;
  ex.sweep.clusters = f.clusters;
  if (f.mixing_edge_prob >= 0.0) {
    if (f.mixing_edge_prob > 1.0) throw ConfigError("--mixing-edge-prob must lie in [0, 1]");
    ex.sweep.mixing.edge_prob = f.mixing_edge_prob;
  }
  ex.sweep.workers = f.workers == 0 ? default_workers() : f.workers;
  if (f.runs < 1) throw ConfigError("--runs must be >= 1");
  ex.runs = f.runs;
  ex.master_seed = f.seed;
  ex.sample_size = f.sample_size;

  rc.out_path = f.out;
  rc.csv_path = f.csv.empty() ? fs::path(f.out).replace_extension(".csv").string() : f.csv;
  return rc;
}

int cmd_evaluate(const EvaluateFlags& f) {
  RunConfig rc;
  try {
    rc = build_run_config(f);
    if (!f.load_model.empty()) {
      if (rc.experiment.extractor.kind != ExtractorKind::kGmae) {
        throw ConfigError("--load-model requires --extractor gmae");
      }
      rc.experiment.extractor.pretrained_gmae = load_gmae_json(read_text(f.load_model));
    }
  } catch (const std::exception& e) {
    return fail("configuration", e);
  }

  GraphSet dataset;
  try {
    dataset = load_dataset(rc.dataset);
  } catch (const std::exception& e) {
    return fail("load", e);
  }

  const auto start = std::chrono::steady_clock::now();
  ReportDocument doc;
  doc.config = rc;
  doc.config.experiment.extractor.pretrained_gmae.reset();
  doc.dataset_stats = compute_stats(dataset);
  try {
    doc.result = run_experiment(dataset, rc.experiment);
  } catch (const std::exception& e) {
    return fail("evaluate", e);
  }
  doc.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    write_text(rc.out_path, render_report_json(doc));
    write_text(rc.csv_path, render_report_csv(doc));
    if (!f.save_models.empty()) {
      for (const RunRecord& r : doc.result.runs) {
        if (!r.gmae_model) continue;
        write_text(fs::path(f.save_models) /
                       ("gmae_run" + std::to_string(r.run_index) + ".json"),
                   save_gmae_json(*r.gmae_model));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "ggm-eval: write failed: " << e.what() << '\n';
    return kExitRuntime;
  }

  for (const SummaryEntry& e : doc.result.summary.entries) {
    std::printf("%-14s %-12s %-11s median=%+.4f iqr=%.4f\n",
                std::string(to_string(e.kind)).c_str(), e.extractor.c_str(),
                std::string(to_string(e.metric)).c_str(), e.median, e.iqr());
  }
  std::cout << "report: " << rc.out_path << "\ntable:  " << rc.csv_path << '\n';
  return kExitOk;
}

int cmd_plot(const std::string& report_path, const std::string& out_path) {
  std::vector<ReportGroup> groups;
  try {
    groups = parse_report_groups(read_text(report_path));
  } catch (const std::exception& e) {
    return fail("plot", e);
  }
  try {
    write_text(out_path, render_violin_svg(groups));
  } catch (const std::exception& e) {
    std::cerr << "ggm-eval: write failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::cout << "wrote " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate graph generative-model metrics by perturbation sweeps"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file; options go under [evaluate], [stats], ...");

  DatasetFlags stats_flags;
  CLI::App* stats = app.add_subcommand("stats", "Print dataset statistics after size filtering");
  stats_flags.add_to(*stats, true);

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic E-R corpus in TUDataset format");
  synth->add_option("--graphs", synth_flags.graphs, "Number of graphs")->check(CLI::PositiveNumber);
  synth->add_option("--nodes", synth_flags.nodes, "Node-count range MIN MAX");
  synth->add_option("--edge-prob", synth_flags.edge_prob, "Edge-probability range MIN MAX");
  synth->add_option("--seed", synth_flags.seed, "Random seed");
  synth->add_option("--out-dir", synth_flags.out_dir, "Output directory")->required();
  synth->add_option("--name", synth_flags.name, "Dataset name (file prefix)");

  EvaluateFlags ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Run perturbation sweeps and write a report");
  ev.dataset.add_to(*evaluate, true);
  evaluate->add_option("--sample-size", ev.sample_size, "Graphs sampled per run");
  evaluate->add_option("--extractor", ev.extractor, "stats | random-gnn | gmae")
      ->check(CLI::IsMember({"stats", "random-gnn", "gmae"}));
  evaluate->add_option("--perturbation", ev.perturbations,
                       "mixing | rewiring | mode-collapse | mode-dropping (repeatable; default all)")
      ->check(CLI::IsMember({"mixing", "rewiring", "mode-collapse", "mode-dropping"}));
  evaluate->add_option("--metrics", ev.metrics, "Comma list of metrics");
  evaluate->add_option("--step", ev.step, "Severity step");
  evaluate->add_option("--runs", ev.runs, "Seeded repetitions");
  evaluate->add_option("--clusters", ev.clusters, "Clusters for mode perturbations");
  evaluate->add_option("--knn-k", ev.knn_k, "k for precision/recall/density/coverage");
  evaluate->add_option("--seed", ev.seed, "Master seed");
  evaluate->add_option("--out", ev.out, "Report path (JSON)");
  evaluate->add_option("--csv", ev.csv, "Flat table path (default: report path with .csv)");
  evaluate->add_option("--workers", ev.workers, "Worker threads (0 = all cores)")
      ->envname("GGM_EVAL_WORKERS");
  evaluate->add_option("--hidden-dim", ev.hidden_dim, "Hidden width of the GNN extractors");
  evaluate->add_option("--layers", ev.layers, "Message-passing layers");
  evaluate->add_option("--epochs", ev.epochs, "GMAE training epochs");
  evaluate->add_option("--mask-rate", ev.mask_rate, "GMAE mask rate");
  evaluate->add_option("--lr", ev.learning_rate, "GMAE learning rate");
  evaluate->add_option("--sce-gamma", ev.sce_gamma, "Scaled cosine error exponent");
  evaluate->add_option("--rbf-sigma", ev.rbf_sigma, "RBF bandwidth (default: median heuristic)");
  evaluate->add_option("--mixing-edge-prob", ev.mixing_edge_prob,
                       "Edge probability of mixing replacements (default: keep density)");
  evaluate->add_option("--load-model", ev.load_model, "Use a saved GMAE instead of training");
  evaluate->add_option("--save-models", ev.save_models, "Directory for trained GMAE parameters");

  std::string plot_report;
  std::string plot_out = "violins.svg";
  CLI::App* plot = app.add_subcommand("plot", "Render per-run Spearman violins as SVG");
  plot->add_option("--report", plot_report, "Report JSON from evaluate")->required();
  plot->add_option("--out", plot_out, "SVG output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*stats) return cmd_stats(stats_flags);
  if (*synth) return cmd_synth(synth_flags);
  if (*evaluate) return cmd_evaluate(ev);
  if (*plot) return cmd_plot(plot_report, plot_out);
  return kExitUsage;
}
