#include "ggmeval/report.hpp"

#include <cstdio>
#include <sstream>

#include "ggmeval/common.hpp"
#include "json.hpp"

namespace ggmeval {

namespace {

using json = nlohmann::ordered_json;

json config_json(const RunConfig& rc) {
  const ExperimentConfig& ex = rc.experiment;
  json dataset;
  if (rc.dataset.synthetic) {
    const SyntheticSpec& s = *rc.dataset.synthetic;
    dataset["source"] = "synthetic";
    dataset["num_graphs"] = s.num_graphs;
    dataset["nodes"] = {s.min_nodes, s.max_nodes};
    dataset["edge_prob"] = {s.min_edge_prob, s.max_edge_prob};
    dataset["seed"] = s.seed;
  } else {
    dataset["source"] = "tudataset";
    dataset["dir"] = rc.dataset.dir;
    dataset["name"] = rc.dataset.name;
  }
  dataset["min_nodes"] = rc.dataset.min_nodes;
  dataset["max_nodes"] = rc.dataset.max_nodes;

  const GmaeConfig& g = ex.extractor.gmae;
  json extractor;
  extractor["kind"] = std::string(to_string(ex.extractor.kind));
  extractor["hidden_dim"] = ex.extractor.hidden_dim;
  extractor["num_layers"] = ex.extractor.num_layers;
  extractor["features"] =
      ex.extractor.features ? json(describe(*ex.extractor.features)) : json("auto");
  extractor["gmae"] = {{"hidden_dim", g.hidden_dim},
                       {"num_layers", g.num_layers},
                       {"mask_rate", g.mask_rate},
                       {"epochs", g.epochs},
                       {"learning_rate", g.learning_rate},
                       {"sce_gamma", g.sce_gamma}};

  json kinds = json::array();
  for (PerturbationKind k : ex.kinds) kinds.push_back(std::string(to_string(k)));
  json metrics = json::array();
  for (Metric m : ex.metrics.metrics) metrics.push_back(std::string(to_string(m)));

  json c;
  c["dataset"] = std::move(dataset);
  c["sample_size"] = ex.sample_size;
  c["extractor"] = std::move(extractor);
  c["perturbations"] = std::move(kinds);
  c["metrics"] = std::move(metrics);
  c["knn_k"] = ex.metrics.knn.k;
  c["rbf_sigma"] = ex.metrics.rbf_sigma ? json(*ex.metrics.rbf_sigma) : json("median");
  c["step"] = ex.sweep.step;
  c["clusters"] = ex.sweep.clusters;
  c["mixing_edge_prob"] = ex.sweep.mixing.edge_prob
                              ? json(*ex.sweep.mixing.edge_prob)
                              : json("preserve");
  c["runs"] = ex.runs;
  c["master_seed"] = ex.master_seed;
  return c;
}

json sweep_json(const SweepResult& s) {
  json j;
  j["perturbation"] = std::string(to_string(s.kind));
  j["extractor"] = s.extractor;
  j["severities"] = s.severities();
  json scores;
  for (std::size_t i = 0; i < s.spearman.size(); ++i) {
    const Metric m = s.spearman[i].first;
    scores[std::string(to_string(m))] = {{"raw", s.raw_series(m)},
                                         {"oriented", s.oriented_series(m)},
                                         {"normalized", s.normalized[i].second}};
  }
  j["scores"] = std::move(scores);
  json rho;
  for (const auto& [m, v] : s.spearman) rho[std::string(to_string(m))] = v;
  j["spearman"] = std::move(rho);
  return j;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report_json(const ReportDocument& doc) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["config"] = config_json(doc.config);
  const DatasetStats& st = doc.dataset_stats;
  root["dataset_stats"] = {{"num_graphs", st.num_graphs},
                           {"mean_nodes", st.mean_nodes},
                           {"min_nodes", st.min_nodes},
                           {"max_nodes", st.max_nodes},
                           {"mean_edges", st.mean_edges},
                           {"min_edges", st.min_edges},
                           {"max_edges", st.max_edges}};
  json runs = json::array();
  json run_seconds = json::array();
  for (const RunRecord& r : doc.result.runs) {
    json jr;
    jr["run_index"] = r.run_index;
    jr["run_seed"] = r.run_seed;
    jr["num_graphs"] = r.num_graphs;
    jr["training_losses"] = r.training_losses;
    json sweeps = json::array();
    for (const SweepResult& s : r.sweeps) sweeps.push_back(sweep_json(s));
    jr["sweeps"] = std::move(sweeps);
    runs.push_back(std::move(jr));
    run_seconds.push_back(r.seconds);
  }
  root["runs"] = std::move(runs);
  json summary = json::array();
  for (const SummaryEntry& e : doc.result.summary.entries) {
    summary.push_back({{"extractor", e.extractor},
                       {"perturbation", std::string(to_string(e.kind))},
                       {"metric", std::string(to_string(e.metric))},
                       {"values", e.values},
                       {"median", e.median},
                       {"q1", e.q1},
                       {"q3", e.q3},
                       {"iqr", e.iqr()}});
  }
  root["summary"] = std::move(summary);
  root["timings"] = {{"run_seconds", std::move(run_seconds)},
                     {"total_seconds", doc.total_seconds}};
  return root.dump(2) + "\n";
}

std::string render_report_csv(const ReportDocument& doc) {
  std::ostringstream out;
  out << "run,perturbation,extractor,metric,level,severity,raw,oriented,"
         "normalized\n";
  for (const RunRecord& r : doc.result.runs) {
    for (const SweepResult& s : r.sweeps) {
      for (std::size_t mi = 0; mi < s.spearman.size(); ++mi) {
        const Metric m = s.spearman[mi].first;
        const auto& norm = s.normalized[mi].second;
        for (std::size_t l = 0; l < s.levels.size(); ++l) {
          const MetricScore& sc = s.levels[l].report.at(m);
          out << r.run_index << ',' << to_string(s.kind) << ',' << s.extractor
              << ',' << to_string(m) << ',' << l << ','
              << fmt_double(s.levels[l].t) << ',' << fmt_double(sc.raw) << ','
              << fmt_double(sc.oriented) << ',' << fmt_double(norm[l]) << '\n';
        }
      }
    }
  }
  return out.str();
}

std::vector<ReportGroup> parse_report_groups(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    const int version = root.at("schema_version").get<int>();
    if (version != kReportSchemaVersion) {
      throw ConfigError("unsupported report schema_version " +
                        std::to_string(version));
    }
    std::vector<ReportGroup> groups;
    for (const json& e : root.at("summary")) {
      ReportGroup g;
      g.extractor = e.at("extractor").get<std::string>();
      g.perturbation = e.at("perturbation").get<std::string>();
      g.metric = e.at("metric").get<std::string>();
      g.values = e.at("values").get<std::vector<double>>();
      groups.push_back(std::move(g));
    }
    return groups;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace ggmeval
