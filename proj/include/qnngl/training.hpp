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

#include <functional>
#include <utility>
#include <vector>

#include "qnngl/graph.hpp"
#include "qnngl/network.hpp"
#include "qnngl/types.hpp"

namespace qnngl {

// Gradient-ascent training of the perceptron unitaries. Each round replaces
// every perceptron U by exp(i * epsilon * K) * U, where the Hermitian
// generator K is assembled analytically from commutators of the
// forward-propagated inputs with backward-propagated target operators. The
// sign convention is fixed so that the combined objective
//   L = L_supervised + gamma_graph * L_graph     (gamma_graph <= 0)
// is non-decreasing to first order in epsilon.

struct Hyperparams {
  double epsilon = 0.01;     // step size of the unitary rotation
  double eta = 1.0;          // overall generator scale (> 0)
  double gamma_graph = 0.0;  // graph-loss weight (<= 0); 0 disables the graph term
  int rounds = 1000;
  int shots = 30;
  std::uint64_t seed = 0;

  // Optional early stop: end training when the combined loss improved by
  // less than plateau_rel_tol (relatively) over plateau_window rounds.
  bool plateau_stop = false;
  int plateau_window = 50;
  double plateau_rel_tol = 1e-7;

  void validate() const {
    if (epsilon <= 0.0) throw std::invalid_argument("hyperparams: epsilon must be > 0");
    if (eta <= 0.0) throw std::invalid_argument("hyperparams: eta must be > 0");
    if (gamma_graph > 0.0) throw std::invalid_argument("hyperparams: gamma_graph must be <= 0");
    if (rounds < 0) throw std::invalid_argument("hyperparams: rounds must be >= 0");
    if (shots < 1) throw std::invalid_argument("hyperparams: shots must be >= 1");
    if (plateau_window < 1) throw std::invalid_argument("hyperparams: plateau window must be >= 1");
  }
};

// Losses of one network state. Vacuous means are recorded as 0 (supervised
// loss when no vertex is supervised, testing loss when every vertex is).
struct LossRecord {
  int step_index = 0;
  double l_sv = 0.0;        // mean supervised fidelity, in [0, 1]
  double l_graph = 0.0;     // adjacency-weighted sum of output distances, >= 0
  double l_combined = 0.0;  // l_sv + gamma_graph * l_graph
  double l_usv = 0.0;       // mean fidelity on unsupervised vertices, in [0, 1]
};

struct TrainingTrace {
  Hyperparams hyper;
  SupervisionMask mask;
  std::vector<LossRecord> records;  // entry k holds the losses after k updates
  NetworkState final_network;
};

// ---------------------------------------------------------------------
// Loss functions
// ---------------------------------------------------------------------

// Mean target fidelity over the supervised vertices (requires >= 1).
double loss_supervised(const std::vector<DensityMatrix>& outputs,
                       const std::vector<PureState>& targets, const SupervisionMask& mask);

// Ordered double sum over vertex pairs of adjacency-weighted
// Hilbert-Schmidt distances between outputs; each undirected edge of a
// symmetric adjacency contributes twice.
double loss_graph(const std::vector<DensityMatrix>& outputs, const RealMat& adjacency);

double loss_combined(const std::vector<DensityMatrix>& outputs,
                     const std::vector<PureState>& targets, const SupervisionMask& mask,
                     const RealMat& adjacency, double gamma_graph);

// Mean target fidelity over the unsupervised vertices (requires >= 1).
double loss_testing(const std::vector<DensityMatrix>& outputs,
                    const std::vector<PureState>& targets, const SupervisionMask& mask);

// Feeds every dataset input forward once and evaluates all four losses.
LossRecord evaluate_losses(const NetworkState& network, const GraphDataset& ds,
                           const SupervisionMask& mask, double gamma_graph);
LossRecord losses_from_traces(const std::vector<ForwardTrace>& traces, const GraphDataset& ds,
                              const SupervisionMask& mask, double gamma_graph);

// ---------------------------------------------------------------------
// Update generators
// ---------------------------------------------------------------------

// Commutator of the forward-propagated input with the backward-conjugated
// target projector, evaluated on the full network register with every
// perceptron embedded globally. Anti-Hermitian. This is the always-available
// reference the reduced two-register evaluation is checked against.
Mat update_commutator_supervised(const NetworkState& network, const DensityMatrix& rho_in,
                                 const PureState& target, int layer, int j);

// Pair variant: forward-propagates the difference of two inputs and
// backward-conjugates the difference of the two current outputs.
Mat update_commutator_pair(const NetworkState& network, const DensityMatrix& rho_in_v,
                           const DensityMatrix& rho_in_w, const DensityMatrix& rho_out_v,
                           const DensityMatrix& rho_out_w, int layer, int j);

// Qubits kept by the reduction of a full-register commutator for perceptron
// (layer, j): the previous register plus the perceptron's output qubit.
std::vector<int> generator_support(const NetworkTopology& topology, int layer, int j);

enum class GeneratorEval {
  TwoLayerReduced,  // production path: states and conjugations on two registers at a time
  FullSpace,        // reference path: everything on the full network register
};

// Hermitian update generator for perceptron (layer, j):
//   K = eta * [ (2^{m_prev} i / S) * sum_u tr_rest M_u
//             + gamma_graph * 2^{m_prev + 1} i * sum_{v,w} A_vw tr_rest M_vw ]
// with the supervised term omitted when no vertex is supervised and the
// graph term omitted when gamma_graph is 0. Throws when both are absent.
HermitianOperator update_generator(const NetworkState& network, const GraphDataset& ds,
                                   const SupervisionMask& mask,
                                   const std::vector<ForwardTrace>& traces,
                                   const Hyperparams& hyper, int layer, int j,
                                   GeneratorEval eval = GeneratorEval::TwoLayerReduced);

// Generators for every perceptron, all reading the same pre-update network.
std::vector<std::vector<HermitianOperator>> all_update_generators(
    const NetworkState& network, const GraphDataset& ds, const SupervisionMask& mask,
    const std::vector<ForwardTrace>& traces, const Hyperparams& hyper,
    GeneratorEval eval = GeneratorEval::TwoLayerReduced);

// Replaces every perceptron U by exp(i * epsilon * K) * U.
NetworkState apply_update(const NetworkState& network,
                          const std::vector<std::vector<HermitianOperator>>& generators,
                          double epsilon);

// ---------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------

// One synchronous update: all generators are evaluated at the given network
// state, then applied together. The returned record holds the pre-update
// losses (step_index is left at 0 for the caller to fill).
std::pair<NetworkState, LossRecord> update_step(const NetworkState& network, const GraphDataset& ds,
                                                const SupervisionMask& mask, const Hyperparams& hyper,
                                                GeneratorEval eval = GeneratorEval::TwoLayerReduced);

// Fixed number of rounds (plus the optional plateau stop); the trace records
// losses at step 0 and after every update.
TrainingTrace train(const NetworkState& initial, const GraphDataset& ds, const SupervisionMask& mask,
                    const Hyperparams& hyper, GeneratorEval eval = GeneratorEval::TwoLayerReduced);

// ---------------------------------------------------------------------
// Supervised-count sweep
// ---------------------------------------------------------------------

struct SweepRow {
  int s = 0;
  double mean_training_sv = 0.0;     // final supervised loss, gamma = 0 arm
  double mean_training_graph = 0.0;  // final supervised loss, graph arm
  double mean_testing_sv = 0.0;      // final testing loss, gamma = 0 arm
  double mean_testing_graph = 0.0;   // final testing loss, graph arm
};

// Stream handed to shot (s, shot) of a sweep; dataset, mask, and initial
// network are drawn from it in that order, so both arms of the shot start
// from identical state.
Rng sweep_shot_rng(std::uint64_t master_seed, int s, int shot);

// For each supervised count, runs `hyper.shots` paired trainings: each shot
// draws a fresh dataset, mask, and initial network from its own child seed
// stream, then trains both the gamma = 0 arm and the configured-gamma arm
// from identical starting points. Shots run on `jobs` worker threads
// (0 = hardware concurrency); results are deterministic given hyper.seed
// regardless of the thread count.
std::vector<SweepRow> sweep_supervised(const std::function<GraphDataset(Rng&)>& dataset_builder,
                                       const NetworkTopology& topology, const Hyperparams& hyper,
                                       const std::vector<int>& s_values, std::size_t jobs = 0);

// ---------------------------------------------------------------------
// Finite-difference validation
// ---------------------------------------------------------------------

struct GradientCheckProbe {
  double epsilon = 0.0;
  double fd_derivative = 0.0;  // (L(s + eps) - L(s)) / eps
  double residual_abs = 0.0;
  double residual_rel = 0.0;
};

struct GradientCheckReport {
  double analytic_derivative = 0.0;
  double loss_at_start = 0.0;
  std::vector<GradientCheckProbe> probes;
  double fitted_order = 0.0;  // log-log slope of residual vs epsilon
};

// First-order directional derivative of the combined loss along the update
// generated by `generators`, assembled from full-register commutators. Used
// as the analytic side of the finite-difference check.
double analytic_directional_derivative(const NetworkState& network, const GraphDataset& ds,
                                       const SupervisionMask& mask, const Hyperparams& hyper,
                                       const std::vector<std::vector<HermitianOperator>>& generators);

// Compares the finite-difference quotient of the combined loss against the
// analytic derivative for each probe step size.
GradientCheckReport finite_difference_check(const NetworkState& network, const GraphDataset& ds,
                                            const SupervisionMask& mask, const Hyperparams& hyper,
                                            const std::vector<double>& probe_epsilons);

}  // namespace qnngl
