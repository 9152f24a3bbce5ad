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

// Command-line harness: dataset generation, paired training runs,
// supervised-count sweeps, one-command experiment replication, and the
// finite-difference gradient check.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
// violation.

#include <iostream>

#include <CLI11.hpp>

#include "qnngl/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  qnngl::ExperimentConfig cfg;
  bool seed_given = false;
  std::uint64_t seed = 0;
};

// Attaches the shared flags to a subcommand; flags override config-file values.
void add_common_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--seed", opts.seed, "master seed (overrides config)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--output", opts.cfg.output_dir, "output directory");
  cmd->add_option("--jobs", opts.cfg.jobs, "worker threads for sweeps (0 = all cores)");
  cmd->add_flag("--emit-svg", opts.cfg.emit_svg, "also write SVG plots");
  cmd->add_option("--dataset", opts.cfg.dataset, "builtin dataset name or dataset file path");
  cmd->add_option("--topology", opts.cfg.topology, "layer widths, e.g. --topology 3 1");
  cmd->add_option("--epsilon", opts.cfg.epsilon, "update step size");
  cmd->add_option("--eta", opts.cfg.eta, "generator scale");
  cmd->add_option("--gamma", opts.cfg.gamma_graph, "graph-loss weight (<= 0)");
  cmd->add_option("--rounds", opts.cfg.rounds, "training rounds");
  cmd->add_option("--shots", opts.cfg.shots, "shots per sweep point");
  cmd->add_option("--supervised", opts.cfg.supervised_count, "supervised vertex count for train");
  cmd->add_option("--s-values", opts.cfg.s_values, "supervised counts for sweep");
}

// Layering: defaults < config file < explicit flags. The flags were already
// parsed into a scratch config, so replay them on top of the file values.
qnngl::ExperimentConfig resolve_config(const CLI::App* cmd, CliOptions& opts,
                                       qnngl::ExperimentConfig base) {
  if (!opts.config_path.empty()) qnngl::merge_config_file(base, opts.config_path);
  if (cmd->count("--output")) base.output_dir = opts.cfg.output_dir;
  if (cmd->count("--jobs")) base.jobs = opts.cfg.jobs;
  if (cmd->count("--emit-svg")) base.emit_svg = opts.cfg.emit_svg;
  if (cmd->count("--dataset")) base.dataset = opts.cfg.dataset;
  if (cmd->count("--topology")) base.topology = opts.cfg.topology;
  if (cmd->count("--epsilon")) base.epsilon = opts.cfg.epsilon;
  if (cmd->count("--eta")) base.eta = opts.cfg.eta;
  if (cmd->count("--gamma")) base.gamma_graph = opts.cfg.gamma_graph;
  if (cmd->count("--rounds")) base.rounds = opts.cfg.rounds;
  if (cmd->count("--shots")) base.shots = opts.cfg.shots;
  if (cmd->count("--supervised")) base.supervised_count = opts.cfg.supervised_count;
  if (cmd->count("--s-values")) base.s_values = opts.cfg.s_values;
  if (opts.seed_given) {
    base.seed = opts.seed;
    base.seed_set = true;
  }
  return base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator and trainer for dissipative quantum neural networks "
               "learning graph-structured quantum data"};
  app.require_subcommand(1);

  CliOptions opts;

  CLI::App* gen = app.add_subcommand("gen-data", "generate a dataset file");
  add_common_options(gen, opts);

  CLI::App* train_cmd = app.add_subcommand(
      "train", "train the paired gamma=0 / gamma<0 runs and write the per-round CSV");
  add_common_options(train_cmd, opts);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "sweep supervised counts and write the mean CSV");
  add_common_options(sweep_cmd, opts);

  std::string example;
  CLI::App* replicate_cmd =
      app.add_subcommand("replicate", "run a full builtin experiment (training + sweep)");
  replicate_cmd->add_option("example", example, "which experiment: clusters or line")->required();
  add_common_options(replicate_cmd, opts);

  int grad_instances = 24;
  CLI::App* grad_cmd = app.add_subcommand(
      "check-gradients", "validate analytic update generators against finite differences");
  grad_cmd->add_option("--instances", grad_instances, "number of random instances");
  add_common_options(grad_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      auto cfg = resolve_config(gen, opts, qnngl::ExperimentConfig{});
      auto result = qnngl::cmd_gen_data(cfg);
      std::cout << "dataset: " << result.dataset_path << "\n"
                << "vertices: " << result.num_vertices << "\n"
                << "edges: " << result.num_edges << "\n";
    } else if (train_cmd->parsed()) {
      auto cfg = resolve_config(train_cmd, opts, qnngl::ExperimentConfig{});
      auto result = qnngl::cmd_train(cfg);
      std::cout << "training CSV: " << result.csv_path << "\n"
                << "final supervised-arm loss: " << result.final_sv.l_sv
                << " (testing " << result.final_sv.l_usv << ")\n"
                << "final graph-arm loss: " << result.final_graph.l_sv << " (testing "
                << result.final_graph.l_usv << ")\n";
      for (const auto& p : result.svg_paths) std::cout << "plot: " << p << "\n";
    } else if (sweep_cmd->parsed()) {
      auto cfg = resolve_config(sweep_cmd, opts, qnngl::ExperimentConfig{});
      auto result = qnngl::cmd_sweep(cfg);
      std::cout << "sweep CSV: " << result.csv_path << "\n";
      for (const auto& row : result.rows)
        std::cout << "  S=" << row.s << " testing: supervised " << row.mean_testing_sv
                  << ", graph " << row.mean_testing_graph << "\n";
      for (const auto& p : result.svg_paths) std::cout << "plot: " << p << "\n";
    } else if (replicate_cmd->parsed()) {
      auto cfg = resolve_config(replicate_cmd, opts, qnngl::replicate_defaults(example));
      auto result = qnngl::cmd_replicate(cfg, example);
      std::cout << "dataset: " << result.dataset_path << "\n"
                << "training CSV: " << result.train.csv_path << "\n"
                << "sweep CSV: " << result.sweep.csv_path << "\n"
                << "manifest: " << result.manifest_path << "\n";
    } else if (grad_cmd->parsed()) {
      auto cfg = resolve_config(grad_cmd, opts, qnngl::ExperimentConfig{});
      std::cout << "finite-difference check over " << grad_instances << " random instances\n";
      auto result = qnngl::run_gradient_battery(grad_instances, cfg.seed, &std::cout);
      std::cout << (result.passed() ? "all instances passed" : "FAILURES detected") << " (worst residual "
                << result.worst_residual << ", allowed " << result.worst_allowed << ")\n";
      if (!result.passed()) return 3;
    }
  } catch (const qnngl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qnngl::InvariantViolation& e) {
    std::cerr << "numerical invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
