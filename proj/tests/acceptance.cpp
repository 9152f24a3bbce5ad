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

// Acceptance suite. Each criterion prints exactly one PASS/FAIL line with
// its measured values; the binary exits nonzero when any requested
// criterion fails. Run with no arguments for all criteria or list criterion
// numbers (e.g. "acceptance 1 3 7").

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "qnngl/experiments.hpp"
#include "qnngl/training.hpp"

using namespace qnngl;
namespace fs = std::filesystem;

namespace {

std::size_t worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Line {
  bool pass = false;
  std::string text;
};

// ---------------------------------------------------------------------
// 1. Gradient oracle: finite differences vs analytic update generators.
// ---------------------------------------------------------------------
Line criterion_gradient_oracle() {
  GradientBatteryResult battery = run_gradient_battery(24, 0xC0FFEE, nullptr, 1e-4, 1e-5, 10.0);
  std::ostringstream out;
  out << "gradient oracle: " << battery.instances - battery.failures << "/" << battery.instances
      << " instances with |fd - analytic| <= 10*eps at eps=1e-4 and shrinking residual at 1e-5"
      << " (worst residual " << battery.worst_residual << ", bound " << battery.worst_allowed << ")";
  return {battery.passed(), out.str()};
}

// ---------------------------------------------------------------------
// 2. CPTP + unitarity after 1000 update steps on the clusters run.
// ---------------------------------------------------------------------
Line criterion_cptp_unitarity() {
  Rng rng = sweep_shot_rng(0xACCE2, 3, 0);
  GraphDataset ds = dataset_connected_clusters(rng);
  SupervisionMask mask = select_supervised(ds.num_vertices(), 3, rng);
  NetworkState net = init_network(NetworkTopology({3, 1}), rng);
  Hyperparams hyper;
  hyper.gamma_graph = -0.5;
  hyper.epsilon = 0.01;

  double worst_unitarity = 0.0, worst_trace = 0.0, worst_eig = 1.0;
  auto check_outputs = [&](const NetworkState& n) {
    for (int v = 0; v < ds.num_vertices(); ++v) {
      DensityMatrix out = network_output(n, ds.input_density(v));
      worst_trace = std::max(worst_trace, std::abs(out.trace_real() - 1.0));
      Eigen::SelfAdjointEigenSolver<Mat> es(out.matrix, Eigen::EigenvaluesOnly);
      worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    }
  };

  for (int round = 0; round < 1000; ++round) {
    auto [next, record] = update_step(net, ds, mask, hyper);
    net = std::move(next);
    if ((round + 1) % 100 == 0) check_outputs(net);
  }
  check_outputs(net);
  for (const auto& layer : net.perceptrons)
    for (const Mat& u : layer)
      worst_unitarity = std::max(
          worst_unitarity,
          max_abs((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).eval()));

  const bool pass = worst_unitarity <= 1e-8 && worst_trace <= 1e-9 && worst_eig >= -1e-8;
  std::ostringstream out;
  out << "CPTP + unitarity after 1000 steps: max |U*U - I| = " << worst_unitarity
      << " (<= 1e-8), max |tr - 1| = " << worst_trace << " (<= 1e-9), min eigenvalue = " << worst_eig
      << " (>= -1e-8)";
  return {pass, out.str()};
}

// ---------------------------------------------------------------------
// 3. Equivalence of the layered/reduced path with the full-register path.
// ---------------------------------------------------------------------
Line criterion_equivalence() {
  const std::vector<std::vector<int>> shapes = {{1, 1},    {2, 1},       {3, 1},    {1, 2, 1},
                                                {2, 2, 1}, {2, 3, 1},    {1, 1, 1, 1},
                                                {1, 2, 2, 1}, {2, 1, 2, 1}, {1, 1, 2, 1}};
  Rng rng(0xE0);
  double worst_output = 0.0, worst_generator = 0.0;
  for (const auto& widths : shapes) {
    NetworkTopology topo(widths);
    NetworkState net = init_network(topo, rng);

    GraphDataset ds;
    const int nv = 3;
    for (int v = 0; v < nv; ++v) {
      ds.inputs.push_back(random_pure_state(topo.widths.front(), rng));
      ds.targets.push_back(random_pure_state(topo.widths.back(), rng));
    }
    ds.adjacency = RealMat::Zero(nv, nv);
    ds.adjacency(0, 1) = ds.adjacency(1, 0) = 0.3;
    ds.adjacency(1, 2) = ds.adjacency(2, 1) = 0.2;
    SupervisionMask mask(nv, {0, 1});
    Hyperparams hyper;
    hyper.gamma_graph = -0.5;

    std::vector<ForwardTrace> traces;
    for (int v = 0; v < nv; ++v) traces.push_back(feedforward(net, ds.input_density(v)));

    DensityMatrix global = network_output_global(net, ds.input_density(0));
    worst_output = std::max(worst_output, max_abs(global.matrix - traces[0].output().matrix));

    for (int l = 0; l < topo.num_unitary_layers(); ++l) {
      for (int j = 0; j < topo.widths[static_cast<std::size_t>(l) + 1]; ++j) {
        HermitianOperator reduced = update_generator(net, ds, mask, traces, hyper, l, j,
                                                     GeneratorEval::TwoLayerReduced);
        HermitianOperator full =
            update_generator(net, ds, mask, traces, hyper, l, j, GeneratorEval::FullSpace);
        worst_generator = std::max(worst_generator, max_abs(reduced.matrix - full.matrix));
      }
    }
  }
  const bool pass = worst_output <= 1e-10 && worst_generator <= 1e-10;
  std::ostringstream out;
  out << "full-register vs layered equivalence on " << shapes.size()
      << " instances: max output deviation = " << worst_output
      << ", max generator deviation = " << worst_generator << " (both <= 1e-10)";
  return {pass, out.str()};
}

// ---------------------------------------------------------------------
// 4. Headline number: line dataset, S=5 of 10, gamma=-1, 30 shots.
// ---------------------------------------------------------------------
Line criterion_line_headline() {
  Hyperparams hyper;
  hyper.epsilon = 0.01;
  hyper.gamma_graph = -1.0;
  hyper.rounds = 1000;
  hyper.shots = 30;
  hyper.seed = 0x11E;
  auto rows = sweep_supervised([](Rng& r) { return dataset_line(r); }, NetworkTopology({3, 1}),
                               hyper, {5}, worker_count());
  const double graph_mean = rows[0].mean_testing_graph;
  const double sv_mean = rows[0].mean_testing_sv;
  const bool pass = graph_mean >= 0.58 && graph_mean > sv_mean;
  std::ostringstream out;
  out << "line, S=5 of 10, 30 shots: mean graph-arm testing loss = " << graph_mean
      << " (>= 0.58, reference value > 0.6), supervised-only arm = " << sv_mean
      << " (graph arm must exceed it)";
  return {pass, out.str()};
}

// ---------------------------------------------------------------------
// 5. Clusters: graph arm generalizes better at S=3 over >= 10 shots.
// ---------------------------------------------------------------------
Line criterion_clusters_comparison() {
  Hyperparams hyper;
  hyper.epsilon = 0.01;
  hyper.gamma_graph = -0.5;
  hyper.rounds = 1000;
  hyper.shots = 20;
  hyper.seed = 0xC1;
  auto rows = sweep_supervised([](Rng& r) { return dataset_connected_clusters(r); },
                               NetworkTopology({3, 1}), hyper, {3}, worker_count());
  const double graph_mean = rows[0].mean_testing_graph;
  const double sv_mean = rows[0].mean_testing_sv;
  const bool pass = graph_mean > sv_mean;
  std::ostringstream out;
  out << "clusters, S=3, 20 shots: mean testing loss graph arm = " << graph_mean
      << " vs supervised-only arm = " << sv_mean << " (graph arm must exceed it)";
  return {pass, out.str()};
}

// ---------------------------------------------------------------------
// 6. Single-pair convergence across seeds.
// ---------------------------------------------------------------------
Line criterion_single_pair() {
  int converged = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    GraphDataset ds;
    ds.inputs.push_back(random_pure_state(2, rng));
    ds.targets.push_back(random_pure_state(1, rng));
    ds.adjacency = RealMat::Zero(1, 1);
    SupervisionMask mask(1, {0});
    Hyperparams hyper;
    hyper.gamma_graph = 0.0;
    hyper.rounds = 1000;
    hyper.epsilon = 0.01;
    NetworkState net = init_network(NetworkTopology({2, 1}), rng);
    const double final_loss = train(net, ds, mask, hyper).records.back().l_sv;
    worst = std::min(worst, final_loss);
    if (final_loss > 0.95) ++converged;
  }
  std::ostringstream out;
  out << "single-pair convergence on a 2-1 network: " << converged
      << "/10 seeds reach supervised loss > 0.95 after 1000 rounds (need >= 9; worst final loss "
      << worst << ")";
  return {converged >= 9, out.str()};
}

// ---------------------------------------------------------------------
// 7. Threshold reconstruction of both reference edge sets.
// ---------------------------------------------------------------------
Line criterion_threshold_reconstruction() {
  using EdgeSet = std::set<std::pair<int, int>>;
  auto edges_of = [](const RealMat& adj) {
    EdgeSet out;
    for (int v = 0; v < adj.rows(); ++v)
      for (int w = v + 1; w < adj.cols(); ++w)
        if (adj(v, w) != 0.0) out.insert({v, w});
    return out;
  };
  auto describe = [](const EdgeSet& edges) {
    std::ostringstream s;
    s << edges.size() << " edges";
    return s.str();
  };

  Rng rng(1);
  const GraphDataset clusters = dataset_connected_clusters(rng);
  const GraphDataset line = dataset_line(rng);

  const EdgeSet clusters_drawn = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                                  {3, 7}, {4, 7}, {4, 5}, {4, 6}, {5, 6}};
  EdgeSet line_drawn;
  for (int v = 0; v + 1 < 10; ++v) line_drawn.insert({v, v + 1});

  const EdgeSet clusters_at_065 = edges_of(build_adjacency_by_fidelity(clusters.targets, 0.65, 1.0));
  const EdgeSet line_at_093 = edges_of(build_adjacency_by_fidelity(line.targets, 0.93, 1.0));

  const bool clusters_ok = clusters_at_065 == clusters_drawn;
  const bool line_ok = line_at_093 == line_drawn;

  std::ostringstream out;
  out << "threshold reconstruction: clusters at 0.65 -> " << describe(clusters_at_065)
      << (clusters_ok ? " == " : " != ") << "reference drawing (" << describe(clusters_drawn)
      << "); line at 0.93 -> " << describe(line_at_093) << (line_ok ? " == " : " != ")
      << "reference path (" << describe(line_drawn) << ")";
  if (!line_ok) {
    // Document the margin: the rounded printed coefficients put one extra
    // pair above 0.93.
    const double chord = squared_overlap(line.targets[1], line.targets[3]);
    double min_path = 1.0, max_nonpath = 0.0;
    for (int v = 0; v < 10; ++v)
      for (int w = v + 1; w < 10; ++w) {
        const double f = squared_overlap(line.targets[static_cast<std::size_t>(v)],
                                         line.targets[static_cast<std::size_t>(w)]);
        if (w == v + 1)
          min_path = std::min(min_path, f);
        else
          max_nonpath = std::max(max_nonpath, f);
      }
    out << "; rounded coefficients put pair (2,4) at " << chord
        << " >= 0.93, so the path set needs a threshold in (" << max_nonpath << ", " << min_path
        << "] -- the builtin line dataset uses 0.94";
  }
  return {clusters_ok && line_ok, out.str()};
}

// ---------------------------------------------------------------------
// 8. Byte-identical replication across runs and worker counts.
// ---------------------------------------------------------------------
Line criterion_determinism() {
  fs::path base = fs::temp_directory_path() / "qnngl_acceptance_determinism";
  fs::remove_all(base);

  auto run = [&](const std::string& tag, std::size_t jobs) {
    ExperimentConfig cfg = replicate_defaults("line");
    cfg.rounds = 50;  // determinism is scale-independent; keep the check quick
    cfg.shots = 3;
    cfg.s_values = {2, 5};
    cfg.seed = 0xDE7;
    cfg.seed_set = true;
    cfg.jobs = jobs;
    cfg.output_dir = (base / tag).string();
    return cmd_replicate(cfg, "line");
  };

  ReplicateResult a = run("a", 1);
  ReplicateResult b = run("b", 1);
  ReplicateResult c = run("c", 8);

  const bool train_same = read_text_file(a.train.csv_path) == read_text_file(b.train.csv_path) &&
                          read_text_file(a.train.csv_path) == read_text_file(c.train.csv_path);
  const bool sweep_same = read_text_file(a.sweep.csv_path) == read_text_file(b.sweep.csv_path) &&
                          read_text_file(a.sweep.csv_path) == read_text_file(c.sweep.csv_path);
  const bool dataset_same =
      read_text_file(a.dataset_path) == read_text_file(b.dataset_path) &&
      read_text_file(a.dataset_path) == read_text_file(c.dataset_path);
  fs::remove_all(base);

  std::ostringstream out;
  out << "replicate determinism (fixed seed, two runs, jobs 1 vs 8): training CSV "
      << (train_same ? "identical" : "DIFFERS") << ", sweep CSV "
      << (sweep_same ? "identical" : "DIFFERS") << ", dataset "
      << (dataset_same ? "identical" : "DIFFERS");
  return {train_same && sweep_same && dataset_same, out.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

  bool all_pass = true;
  for (int c : selected) {
    Line line;
    switch (c) {
      case 1: line = criterion_gradient_oracle(); break;
      case 2: line = criterion_cptp_unitarity(); break;
      case 3: line = criterion_equivalence(); break;
      case 4: line = criterion_line_headline(); break;
      case 5: line = criterion_clusters_comparison(); break;
      case 6: line = criterion_single_pair(); break;
      case 7: line = criterion_threshold_reconstruction(); break;
      case 8: line = criterion_determinism(); break;
      default:
        std::cerr << "unknown criterion " << c << "\n";
        return 2;
    }
    std::cout << "criterion " << c << ": " << (line.pass ? "PASS" : "FAIL") << " " << line.text
              << std::endl;
    all_pass = all_pass && line.pass;
  }
  return all_pass ? 0 : 1;
}
