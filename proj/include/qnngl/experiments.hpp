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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qnngl/io.hpp"
#include "qnngl/svg.hpp"
#include "qnngl/training.hpp"

namespace qnngl {

inline constexpr const char* kArtifactName = "qnn-graphlearn";
inline constexpr const char* kArtifactVersion = "1.0.0";

// Resolved run configuration. Defaults mirror the reference experiments:
// a 3-1 network trained for 1000 rounds at epsilon 0.01. Flags and config
// files fill this in; every command is deterministic given `seed`.
struct ExperimentConfig {
  std::string dataset = "clusters";  // builtin name ("clusters", "line") or path to a dataset file
  std::vector<int> topology = {3, 1};
  double epsilon = 0.01;
  double eta = 1.0;
  double gamma_graph = -0.5;
  int rounds = 1000;
  int shots = 30;
  int supervised_count = 3;    // S used by `train`
  std::vector<int> s_values;   // sweep counts; empty = 1..N-1
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string output_dir = ".";
  bool emit_svg = false;
  std::size_t jobs = 0;        // 0 = hardware concurrency
  double adjacency_threshold = 0.0;  // 0 = builtin dataset default
};

// Reads a config JSON document; unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);
// Same, but layered on top of existing values.
void merge_config_file(ExperimentConfig& cfg, const std::string& path);

Hyperparams hyperparams_from(const ExperimentConfig& cfg);

// Builtin presets matching the two reference experiments.
ExperimentConfig replicate_defaults(const std::string& example);

// Dataset resolution: builtin names regenerate inputs from the seed stream;
// file datasets are loaded verbatim (the builder then returns the same data
// for every shot).
struct ResolvedDataset {
  std::string name;  // prefix used for output files
  std::function<GraphDataset(Rng&)> builder;
};
ResolvedDataset resolve_dataset(const ExperimentConfig& cfg);

struct GenDataResult {
  std::string dataset_path;
  int num_vertices = 0;
  int num_edges = 0;
};
GenDataResult cmd_gen_data(const ExperimentConfig& cfg);

struct TrainResult {
  std::string csv_path;
  std::string manifest_path;
  std::string network_supervised_path;
  std::string network_graph_path;
  std::vector<std::string> svg_paths;
  LossRecord final_sv;
  LossRecord final_graph;
};
TrainResult cmd_train(const ExperimentConfig& cfg);

struct SweepResult {
  std::string csv_path;
  std::string manifest_path;
  std::vector<std::string> svg_paths;
  std::vector<SweepRow> rows;
};
SweepResult cmd_sweep(const ExperimentConfig& cfg);

struct ReplicateResult {
  std::string dataset_path;
  TrainResult train;
  SweepResult sweep;
  std::string manifest_path;
};
// `cfg` should start from replicate_defaults(example); overrides applied by
// the caller stay in effect.
ReplicateResult cmd_replicate(const ExperimentConfig& cfg, const std::string& example);

// Finite-difference validation battery over randomized small instances
// (one per combination drawn from three topologies and three training
// arms). Writes one line per instance to `log` when given.
struct GradientBatteryResult {
  int instances = 0;
  int failures = 0;
  double worst_residual = 0.0;    // max residual at the coarse probe
  double worst_allowed = 0.0;     // the corresponding bound
  bool passed() const { return failures == 0; }
};
GradientBatteryResult run_gradient_battery(int instances, std::uint64_t seed, std::ostream* log,
                                           double coarse_epsilon = 1e-4, double fine_epsilon = 1e-5,
                                           double bound_factor = 10.0);

}  // namespace qnngl
