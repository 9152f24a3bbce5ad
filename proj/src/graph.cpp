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

#include "qnngl/graph.hpp"

#include <algorithm>
#include <cmath>

namespace qnngl {

std::vector<std::pair<int, int>> GraphDataset::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < num_vertices(); ++v)
    for (int w = v + 1; w < num_vertices(); ++w)
      if (adjacency(v, w) != 0.0) out.emplace_back(v, w);
  return out;
}

SupervisionMask::SupervisionMask(int n_total, std::vector<int> supervised_vertices)
    : supervised(std::move(supervised_vertices)) {
  if (n_total < 0) throw std::invalid_argument("supervision mask: negative vertex count");
  std::sort(supervised.begin(), supervised.end());
  std::vector<bool> taken(static_cast<std::size_t>(n_total), false);
  for (int v : supervised) {
    if (v < 0 || v >= n_total)
      throw std::invalid_argument("supervision mask: vertex " + std::to_string(v) + " out of range");
    if (taken[static_cast<std::size_t>(v)])
      throw std::invalid_argument("supervision mask: duplicate vertex " + std::to_string(v));
    taken[static_cast<std::size_t>(v)] = true;
  }
  for (int v = 0; v < n_total; ++v)
    if (!taken[static_cast<std::size_t>(v)]) unsupervised.push_back(v);
}

RealMat build_adjacency_by_fidelity(const std::vector<PureState>& targets, double threshold,
                                    double weight) {
  if (targets.empty()) throw std::invalid_argument("build_adjacency_by_fidelity: no targets");
  if (threshold <= 0.0 || threshold > 1.0)
    throw std::invalid_argument("build_adjacency_by_fidelity: threshold must be in (0, 1]");
  if (weight <= 0.0) throw std::invalid_argument("build_adjacency_by_fidelity: weight must be > 0");
  const int n = static_cast<int>(targets.size());
  RealMat adj = RealMat::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    for (int w = v + 1; w < n; ++w) {
      if (squared_overlap(targets[static_cast<std::size_t>(v)], targets[static_cast<std::size_t>(w)]) >=
          threshold) {
        adj(v, w) = weight;
        adj(w, v) = weight;
      }
    }
  }
  return adj;
}

namespace {

PureState printed_state(double a, double b) {
  Vec amps(2);
  amps << Complex(a, 0.0), Complex(b, 0.0);
  return PureState::normalized(1, amps);
}

GraphDataset assemble(std::vector<PureState> targets, int input_qubits, double threshold, Rng& rng) {
  GraphDataset ds;
  ds.targets = std::move(targets);
  ds.inputs.reserve(ds.targets.size());
  for (std::size_t v = 0; v < ds.targets.size(); ++v)
    ds.inputs.push_back(random_pure_state(input_qubits, rng));
  ds.adjacency = build_adjacency_by_fidelity(ds.targets, threshold, 1.0);
  return ds;
}

}  // namespace

GraphDataset dataset_connected_clusters(Rng& rng, double threshold) {
  std::vector<PureState> targets = {
      printed_state(1.0, 0.0),     printed_state(0.997, 0.071), printed_state(0.988, 0.152),
      printed_state(0.97, 0.243),  printed_state(0.152, 0.988), printed_state(0.071, 0.997),
      printed_state(0.0, 1.0),     printed_state(0.659, 0.753),
  };
  return assemble(std::move(targets), 3, threshold, rng);
}

GraphDataset dataset_line(Rng& rng, double threshold) {
  std::vector<PureState> targets = {
      printed_state(1.0, 0.0),   printed_state(0.99, 0.21), printed_state(0.96, 0.28),
      printed_state(0.89, 0.45), printed_state(0.78, 0.62), printed_state(0.62, 0.78),
      printed_state(0.45, 0.89), printed_state(0.27, 0.96), printed_state(0.12, 0.99),
      printed_state(0.0, 1.0),
  };
  return assemble(std::move(targets), 3, threshold, rng);
}

SupervisionMask select_supervised(int n_total, int s, Rng& rng) {
  if (n_total < 0) throw std::invalid_argument("select_supervised: negative vertex count");
  if (s < 0 || s > n_total)
    throw std::invalid_argument("select_supervised: supervised count " + std::to_string(s) +
                                " out of range for " + std::to_string(n_total) + " vertices");
  std::vector<int> order(static_cast<std::size_t>(n_total));
  for (int v = 0; v < n_total; ++v) order[static_cast<std::size_t>(v)] = v;
  // Partial Fisher-Yates: the first s entries are a uniform s-subset.
  for (int i = 0; i < s; ++i) {
    auto k = static_cast<std::size_t>(i) +
             static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(n_total - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[k]);
  }
  order.resize(static_cast<std::size_t>(s));
  return SupervisionMask(n_total, std::move(order));
}

ValidationReport validate_dataset(const GraphDataset& ds) {
  ValidationReport report;
  auto note = [&](const std::string& msg) { report.violations.push_back(msg); };

  const int n = ds.num_vertices();
  if (static_cast<int>(ds.inputs.size()) != n)
    note("input count " + std::to_string(ds.inputs.size()) + " differs from vertex count " +
         std::to_string(n));
  if (ds.adjacency.rows() != n || ds.adjacency.cols() != n)
    note("adjacency dimension differs from vertex count");

  for (int v = 0; v < static_cast<int>(ds.inputs.size()); ++v) {
    const auto& in = ds.inputs[static_cast<std::size_t>(v)];
    if (std::abs(in.amplitudes.norm() - 1.0) > defaults::norm_tol)
      note("input state at vertex " + std::to_string(v) + " is not normalized");
    if (v > 0 && in.num_qubits != ds.inputs[0].num_qubits)
      note("input state at vertex " + std::to_string(v) + " has a different qubit count");
  }
  for (int v = 0; v < n; ++v) {
    const auto& t = ds.targets[static_cast<std::size_t>(v)];
    if (std::abs(t.amplitudes.norm() - 1.0) > defaults::norm_tol)
      note("target state at vertex " + std::to_string(v) + " is not normalized");
    if (v > 0 && t.num_qubits != ds.targets[0].num_qubits)
      note("target state at vertex " + std::to_string(v) + " has a different qubit count");
  }

  if (ds.adjacency.rows() == n && ds.adjacency.cols() == n) {
    for (int v = 0; v < n; ++v) {
      if (ds.adjacency(v, v) != 0.0)
        note("adjacency diagonal nonzero at vertex " + std::to_string(v));
      for (int w = 0; w < n; ++w) {
        if (ds.adjacency(v, w) < 0.0)
          note("negative adjacency weight at (" + std::to_string(v) + ", " + std::to_string(w) + ")");
        if (w > v && ds.adjacency(v, w) != ds.adjacency(w, v))
          note("adjacency asymmetric at (" + std::to_string(v) + ", " + std::to_string(w) + ")");
      }
    }
  }
  return report;
}

}  // namespace qnngl
