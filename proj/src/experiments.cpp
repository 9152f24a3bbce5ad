// Copyright 2026 The qnn-graphlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnngl/experiments.hpp"

#include <filesystem>
#include <ostream>

#include <json.hpp>

namespace qnngl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kGenDataTag = 0x67656e64ULL;  // "gend"
constexpr std::uint64_t kTrainTag = 0x7472616eULL;    // "tran"
constexpr std::uint64_t kGradTag = 0x67726164ULL;     // "grad"

void apply_config_json(ExperimentConfig& cfg, const json& doc, const std::string& origin) {
  static const std::vector<std::string> known = {
      "dataset",   "topology",   "epsilon",          "eta",  "gamma_graph",
      "rounds",    "shots",      "supervised_count", "s_values", "seed",
      "output_dir", "emit_svg",  "jobs",             "adjacency_threshold"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw ConfigError(origin + ": unknown config key '" + key + "'");
  }
  try {
    if (doc.contains("dataset")) cfg.dataset = doc["dataset"].get<std::string>();
    if (doc.contains("topology")) cfg.topology = doc["topology"].get<std::vector<int>>();
    if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("eta")) cfg.eta = doc["eta"].get<double>();
    if (doc.contains("gamma_graph")) cfg.gamma_graph = doc["gamma_graph"].get<double>();
    if (doc.contains("rounds")) cfg.rounds = doc["rounds"].get<int>();
    if (doc.contains("shots")) cfg.shots = doc["shots"].get<int>();
    if (doc.contains("supervised_count")) cfg.supervised_count = doc["supervised_count"].get<int>();
    if (doc.contains("s_values")) cfg.s_values = doc["s_values"].get<std::vector<int>>();
    if (doc.contains("seed")) {
      cfg.seed = doc["seed"].get<std::uint64_t>();
      cfg.seed_set = true;
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("emit_svg")) cfg.emit_svg = doc["emit_svg"].get<bool>();
    if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<std::size_t>();
    if (doc.contains("adjacency_threshold"))
      cfg.adjacency_threshold = doc["adjacency_threshold"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": bad value type: " + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["dataset"] = cfg.dataset;
  doc["topology"] = cfg.topology;
  doc["epsilon"] = cfg.epsilon;
  doc["eta"] = cfg.eta;
  doc["gamma_graph"] = cfg.gamma_graph;
  doc["rounds"] = cfg.rounds;
  doc["shots"] = cfg.shots;
  doc["supervised_count"] = cfg.supervised_count;
  doc["s_values"] = cfg.s_values;
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  doc["emit_svg"] = cfg.emit_svg;
  doc["jobs"] = cfg.jobs;
  doc["adjacency_threshold"] = cfg.adjacency_threshold;
  return doc;
}

void write_manifest(const std::string& path, const std::string& command,
                    const ExperimentConfig& cfg, const json& extra = json::object()) {
  json doc;
  doc["artifact"] = kArtifactName;
  doc["version"] = kArtifactVersion;
  doc["command"] = command;
  doc["seed"] = cfg.seed;
  doc["config"] = config_to_json(cfg);
  for (const auto& [k, v] : extra.items()) doc[k] = v;
  write_text_file(path, doc.dump(2) + "\n");
}

std::string ensure_output_dir(const ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir + ": " + ec.message());
  return dir.string();
}

std::string output_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

int count_undirected_edges(const GraphDataset& ds) { return static_cast<int>(ds.edges().size()); }

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.epsilon <= 0.0) throw ConfigError("config: epsilon must be > 0");
  if (cfg.eta <= 0.0) throw ConfigError("config: eta must be > 0");
  if (cfg.gamma_graph > 0.0) throw ConfigError("config: gamma_graph must be <= 0");
  if (cfg.rounds < 0) throw ConfigError("config: rounds must be >= 0");
  if (cfg.shots < 1) throw ConfigError("config: shots must be >= 1");
  try {
    NetworkTopology(cfg.topology);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: topology: ") + e.what());
  }
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  ExperimentConfig cfg;
  merge_config_file(cfg, path);
  return cfg;
}

void merge_config_file(ExperimentConfig& cfg, const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
  apply_config_json(cfg, doc, "config file " + path);
}

Hyperparams hyperparams_from(const ExperimentConfig& cfg) {
  Hyperparams hyper;
  hyper.epsilon = cfg.epsilon;
  hyper.eta = cfg.eta;
  hyper.gamma_graph = cfg.gamma_graph;
  hyper.rounds = cfg.rounds;
  hyper.shots = cfg.shots;
  hyper.seed = cfg.seed;
  return hyper;
}

ExperimentConfig replicate_defaults(const std::string& example) {
  ExperimentConfig cfg;
  cfg.topology = {3, 1};
  cfg.epsilon = 0.01;
  cfg.eta = 1.0;
  cfg.rounds = 1000;
  cfg.shots = 30;
  cfg.supervised_count = 3;
  if (example == "clusters") {
    cfg.dataset = "clusters";
    cfg.gamma_graph = -0.5;
    cfg.s_values = {1, 2, 3, 4, 5, 6, 7};
  } else if (example == "line") {
    cfg.dataset = "line";
    cfg.gamma_graph = -1.0;
    cfg.s_values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else {
    throw ConfigError("unknown example '" + example + "' (expected 'clusters' or 'line')");
  }
  return cfg;
}

ResolvedDataset resolve_dataset(const ExperimentConfig& cfg) {
  ResolvedDataset out;
  const double threshold = cfg.adjacency_threshold;
  if (cfg.dataset == "clusters") {
    out.name = "clusters";
    out.builder = [threshold](Rng& rng) {
      return threshold > 0.0 ? dataset_connected_clusters(rng, threshold)
                             : dataset_connected_clusters(rng);
    };
  } else if (cfg.dataset == "line") {
    out.name = "line";
    out.builder = [threshold](Rng& rng) {
      return threshold > 0.0 ? dataset_line(rng, threshold) : dataset_line(rng);
    };
  } else {
    if (!fs::exists(cfg.dataset))
      throw ConfigError("dataset '" + cfg.dataset +
                        "' is neither a builtin name (clusters, line) nor an existing file");
    GraphDataset loaded = load_dataset_json(cfg.dataset);
    out.name = fs::path(cfg.dataset).stem().string();
    out.builder = [loaded](Rng&) { return loaded; };
  }
  return out;
}

GenDataResult cmd_gen_data(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.dataset != "clusters" && cfg.dataset != "line")
    throw ConfigError("gen-data needs a builtin dataset name: 'clusters' or 'line'");
  ensure_output_dir(cfg);

  ResolvedDataset resolved = resolve_dataset(cfg);
  Rng rng = child_rng(cfg.seed, {kGenDataTag, 0});
  GraphDataset ds = resolved.builder(rng);
  ds.seed = cfg.seed;

  GenDataResult result;
  result.dataset_path = output_path(cfg, resolved.name + "_dataset.json");
  result.num_vertices = ds.num_vertices();
  result.num_edges = count_undirected_edges(ds);
  save_dataset_json(ds, result.dataset_path);
  return result;
}

TrainResult cmd_train(const ExperimentConfig& cfg) {
  validate_common(cfg);
  ensure_output_dir(cfg);
  ResolvedDataset resolved = resolve_dataset(cfg);

  // The train command is shot 0 of the degenerate sweep at S =
  // supervised_count: dataset, mask, and network come from that stream.
  Rng rng = sweep_shot_rng(cfg.seed, cfg.supervised_count, 0);
  GraphDataset ds = resolved.builder(rng);
  ds.seed = cfg.seed;
  const int n = ds.num_vertices();
  if (cfg.supervised_count < 1 || cfg.supervised_count > n - 1)
    throw ConfigError("config: supervised_count must be in [1, " + std::to_string(n - 1) +
                      "] so both training and testing sets are nonempty");
  if (ds.targets[0].num_qubits != NetworkTopology(cfg.topology).widths.back())
    throw ConfigError("config: target qubit count does not match the network output layer");
  if (ds.inputs[0].num_qubits != cfg.topology.front())
    throw ConfigError("config: input qubit count does not match the network input layer");

  SupervisionMask mask = select_supervised(n, cfg.supervised_count, rng);
  NetworkState net0 = init_network(NetworkTopology(cfg.topology), rng);

  Hyperparams hyper = hyperparams_from(cfg);
  Hyperparams arm_sv = hyper;
  arm_sv.gamma_graph = 0.0;
  TrainingTrace trace_sv = train(net0, ds, mask, arm_sv);
  TrainingTrace trace_graph = train(net0, ds, mask, hyper);

  TrainResult result;
  result.csv_path = output_path(cfg, resolved.name + "_training.csv");
  write_text_file(result.csv_path,
                  render_training_csv(cfg.epsilon, trace_sv.records, trace_graph.records));
  result.final_sv = trace_sv.records.back();
  result.final_graph = trace_graph.records.back();

  result.network_supervised_path = output_path(cfg, resolved.name + "_network_supervised.json");
  save_network_json(trace_sv.final_network, result.network_supervised_path);
  result.network_graph_path = output_path(cfg, resolved.name + "_network_graph.json");
  save_network_json(trace_graph.final_network, result.network_graph_path);

  result.manifest_path = output_path(cfg, resolved.name + "_training_manifest.json");
  json extra;
  extra["outputs"] = {result.csv_path, result.network_supervised_path, result.network_graph_path};
  write_manifest(result.manifest_path, "train", cfg, extra);

  if (cfg.emit_svg) {
    const std::string p1 = output_path(cfg, resolved.name + "_training_loss.svg");
    emit_svg(result.csv_path, PlotKind::Training, PlotMetric::TrainingLoss, p1);
    const std::string p2 = output_path(cfg, resolved.name + "_testing_loss.svg");
    emit_svg(result.csv_path, PlotKind::Training, PlotMetric::TestingLoss, p2);
    result.svg_paths = {p1, p2};
  }
  return result;
}

SweepResult cmd_sweep(const ExperimentConfig& cfg) {
  validate_common(cfg);
  ensure_output_dir(cfg);
  ResolvedDataset resolved = resolve_dataset(cfg);

  // Vertex count probe; sweeps regenerate the dataset per shot.
  Rng probe_rng = child_rng(cfg.seed, {kTrainTag, 0});
  const int n = resolved.builder(probe_rng).num_vertices();

  std::vector<int> s_values = cfg.s_values;
  if (s_values.empty())
    for (int s = 1; s <= n - 1; ++s) s_values.push_back(s);
  for (int s : s_values)
    if (s < 1 || s > n - 1)
      throw ConfigError("config: sweep supervised count " + std::to_string(s) + " must be in [1, " +
                        std::to_string(n - 1) + "]");

  Hyperparams hyper = hyperparams_from(cfg);
  std::vector<SweepRow> rows =
      sweep_supervised(resolved.builder, NetworkTopology(cfg.topology), hyper, s_values, cfg.jobs);

  SweepResult result;
  result.rows = rows;
  result.csv_path = output_path(cfg, resolved.name + "_sweep.csv");
  write_text_file(result.csv_path, render_sweep_csv(rows));

  result.manifest_path = output_path(cfg, resolved.name + "_sweep_manifest.json");
  json extra;
  extra["outputs"] = {result.csv_path};
  extra["s_values"] = s_values;
  write_manifest(result.manifest_path, "sweep", cfg, extra);

  if (cfg.emit_svg) {
    const std::string p1 = output_path(cfg, resolved.name + "_sweep_training.svg");
    emit_svg(result.csv_path, PlotKind::Sweep, PlotMetric::TrainingLoss, p1);
    const std::string p2 = output_path(cfg, resolved.name + "_sweep_testing.svg");
    emit_svg(result.csv_path, PlotKind::Sweep, PlotMetric::TestingLoss, p2);
    result.svg_paths = {p1, p2};
  }
  return result;
}

ReplicateResult cmd_replicate(const ExperimentConfig& cfg, const std::string& example) {
  if (!cfg.seed_set)
    throw ConfigError("replicate requires an explicit --seed for reproducibility");
  if (example != "clusters" && example != "line")
    throw ConfigError("unknown example '" + example + "' (expected 'clusters' or 'line')");
  validate_common(cfg);
  ensure_output_dir(cfg);

  ReplicateResult result;
  GenDataResult gen = cmd_gen_data(cfg);
  result.dataset_path = gen.dataset_path;
  result.train = cmd_train(cfg);
  result.sweep = cmd_sweep(cfg);

  result.manifest_path = output_path(cfg, example + "_replicate_manifest.json");
  json extra;
  extra["example"] = example;
  extra["outputs"] = {result.dataset_path, result.train.csv_path, result.sweep.csv_path};
  write_manifest(result.manifest_path, "replicate", cfg, extra);
  return result;
}

GradientBatteryResult run_gradient_battery(int instances, std::uint64_t seed, std::ostream* log,
                                           double coarse_epsilon, double fine_epsilon,
                                           double bound_factor) {
  static const std::vector<std::vector<int>> topologies = {{1, 1}, {2, 1}, {2, 2, 1}};
  static const char* arm_names[3] = {"supervised", "graph-only", "combined"};

  GradientBatteryResult result;
  result.instances = instances;

  for (int i = 0; i < instances; ++i) {
    Rng rng = child_rng(seed, {kGradTag, static_cast<std::uint64_t>(i)});
    const auto& widths = topologies[static_cast<std::size_t>(i) % topologies.size()];
    const int arm = (i / static_cast<int>(topologies.size())) % 3;
    NetworkTopology topo(widths);

    const int n_vertices = 2 + static_cast<int>(uniform_index(rng, 3));
    GraphDataset ds;
    for (int v = 0; v < n_vertices; ++v) {
      ds.inputs.push_back(random_pure_state(topo.widths.front(), rng));
      ds.targets.push_back(random_pure_state(topo.widths.back(), rng));
    }
    // Edge weights are kept small so the second-order remainder of the
    // probe stays below the absolute residual bound at the coarse epsilon.
    ds.adjacency = RealMat::Zero(n_vertices, n_vertices);
    for (int v = 0; v < n_vertices; ++v)
      for (int w = v + 1; w < n_vertices; ++w)
        if (uniform_unit(rng) < 0.5)
          ds.adjacency(v, w) = ds.adjacency(w, v) = 0.05 + 0.2 * uniform_unit(rng);
    // The graph arms need at least one edge to have any signal.
    if (ds.adjacency.cwiseAbs().sum() == 0.0) ds.adjacency(0, 1) = ds.adjacency(1, 0) = 0.1;

    Hyperparams hyper;
    hyper.eta = 1.0;
    int s_count = 0;
    if (arm == 0) {  // supervised only
      hyper.gamma_graph = 0.0;
      s_count = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_vertices)));
    } else if (arm == 1) {  // graph only
      hyper.gamma_graph = -0.25;
      s_count = 0;
    } else {  // combined
      hyper.gamma_graph = -0.25;
      s_count = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n_vertices)));
    }
    SupervisionMask mask = select_supervised(n_vertices, s_count, rng);
    NetworkState net = init_network(topo, rng);

    GradientCheckReport report =
        finite_difference_check(net, ds, mask, hyper, {coarse_epsilon, fine_epsilon});
    const double res_coarse = report.probes[0].residual_abs;
    const double res_fine = report.probes[1].residual_abs;
    const double allowed = bound_factor * coarse_epsilon;
    const bool below_bound = res_coarse <= allowed;
    // Residual must shrink with epsilon unless it is already at noise level.
    const bool shrinking = res_fine < res_coarse || res_coarse < 1e-12;
    const bool ok = below_bound && shrinking;

    if (res_coarse > result.worst_residual) {
      result.worst_residual = res_coarse;
      result.worst_allowed = allowed;
    }
    if (!ok) ++result.failures;
    if (log) {
      (*log) << "  instance " << i << ": topology [";
      for (std::size_t k = 0; k < widths.size(); ++k)
        (*log) << widths[k] << (k + 1 < widths.size() ? "," : "");
      (*log) << "] arm=" << arm_names[arm] << " vertices=" << n_vertices
             << " dL/ds=" << report.analytic_derivative << " residual@" << coarse_epsilon << "="
             << res_coarse << " residual@" << fine_epsilon << "=" << res_fine << " -> "
             << (ok ? "ok" : "FAIL") << "\n";
    }
  }
  return result;
}

}  // namespace qnngl
