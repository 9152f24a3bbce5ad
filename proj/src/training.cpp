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

#include "qnngl/training.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace qnngl {

namespace {

constexpr std::uint64_t kSweepStreamTag = 0x73776565ULL;  // "swee"

void check_perceptron_index(const NetworkTopology& topo, int layer, int j) {
  if (layer < 0 || layer >= topo.num_unitary_layers())
    throw std::invalid_argument("layer index " + std::to_string(layer) + " out of range");
  if (j < 0 || j >= topo.widths[static_cast<std::size_t>(layer) + 1])
    throw std::invalid_argument("perceptron index " + std::to_string(j) + " out of range in layer " +
                                std::to_string(layer));
}

Mat zero_projector(int qubits) {
  Eigen::Index d = dim_for_qubits(qubits);
  Mat p = Mat::Zero(d, d);
  p(0, 0) = 1.0;
  return p;
}

// Flat position of perceptron (layer, j) in global application order.
int global_position(const NetworkTopology& topo, int layer, int j) {
  int pos = 0;
  for (int l = 0; l < layer; ++l) pos += topo.widths[static_cast<std::size_t>(l) + 1];
  return pos + j;
}

// Full-register commutator with arbitrary operators at the input and output
// ends; both supervised and pair commutators reduce to this.
Mat full_space_commutator(const NetworkState& network, const Mat& input_op, const Mat& output_op,
                          int layer, int j) {
  const auto& topo = network.topology;
  check_perceptron_index(topo, layer, j);
  const int n_tot = topo.total_qubits();
  const int m_in = topo.widths.front();
  const int m_out = topo.widths.back();
  if (input_op.rows() != dim_for_qubits(m_in))
    throw std::invalid_argument("full_space_commutator: input operator dimension mismatch");
  if (output_op.rows() != dim_for_qubits(m_out))
    throw std::invalid_argument("full_space_commutator: output operator dimension mismatch");

  const std::vector<Mat> global = embed_network_global(network);
  const int pos = global_position(topo, layer, j);
  const int last = static_cast<int>(global.size()) - 1;

  Mat forward = tensor_product(input_op, zero_projector(n_tot - m_in));
  for (int g = 0; g <= pos; ++g) forward = global[static_cast<std::size_t>(g)] * forward *
                                           global[static_cast<std::size_t>(g)].adjoint();

  Mat backward = tensor_product(Mat::Identity(dim_for_qubits(n_tot - m_out), dim_for_qubits(n_tot - m_out)),
                                output_op);
  for (int g = last; g > pos; --g) backward = global[static_cast<std::size_t>(g)].adjoint() * backward *
                                              global[static_cast<std::size_t>(g)];

  return forward * backward - backward * forward;
}

}  // namespace

// ---------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------

double loss_supervised(const std::vector<DensityMatrix>& outputs,
                       const std::vector<PureState>& targets, const SupervisionMask& mask) {
  if (mask.supervised.empty())
    throw std::invalid_argument("loss_supervised: no supervised vertices");
  if (outputs.size() != targets.size())
    throw std::invalid_argument("loss_supervised: output and target counts differ");
  double sum = 0.0;
  for (int u : mask.supervised)
    sum += fidelity(targets.at(static_cast<std::size_t>(u)), outputs.at(static_cast<std::size_t>(u)));
  return sum / static_cast<double>(mask.supervised.size());
}

double loss_graph(const std::vector<DensityMatrix>& outputs, const RealMat& adjacency) {
  const int n = static_cast<int>(outputs.size());
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw std::invalid_argument("loss_graph: adjacency dimension does not match output count");
  double sum = 0.0;
  for (int v = 0; v < n; ++v) {
    for (int w = 0; w < n; ++w) {
      const double a = adjacency(v, w);
      if (a == 0.0) continue;
      sum += a * hs_distance(outputs[static_cast<std::size_t>(v)], outputs[static_cast<std::size_t>(w)]);
    }
  }
  return sum;
}

double loss_combined(const std::vector<DensityMatrix>& outputs,
                     const std::vector<PureState>& targets, const SupervisionMask& mask,
                     const RealMat& adjacency, double gamma_graph) {
  return loss_supervised(outputs, targets, mask) + gamma_graph * loss_graph(outputs, adjacency);
}

double loss_testing(const std::vector<DensityMatrix>& outputs,
                    const std::vector<PureState>& targets, const SupervisionMask& mask) {
  if (mask.unsupervised.empty())
    throw std::invalid_argument("loss_testing: no unsupervised vertices");
  if (outputs.size() != targets.size())
    throw std::invalid_argument("loss_testing: output and target counts differ");
  double sum = 0.0;
  for (int x : mask.unsupervised)
    sum += fidelity(targets.at(static_cast<std::size_t>(x)), outputs.at(static_cast<std::size_t>(x)));
  return sum / static_cast<double>(mask.unsupervised.size());
}

LossRecord losses_from_traces(const std::vector<ForwardTrace>& traces, const GraphDataset& ds,
                              const SupervisionMask& mask, double gamma_graph) {
  std::vector<DensityMatrix> outputs;
  outputs.reserve(traces.size());
  for (const auto& t : traces) outputs.push_back(t.output());

  LossRecord rec;
  rec.l_sv = mask.supervised.empty() ? 0.0 : loss_supervised(outputs, ds.targets, mask);
  rec.l_graph = loss_graph(outputs, ds.adjacency);
  rec.l_combined = rec.l_sv + gamma_graph * rec.l_graph;
  rec.l_usv = mask.unsupervised.empty() ? 0.0 : loss_testing(outputs, ds.targets, mask);
  return rec;
}

LossRecord evaluate_losses(const NetworkState& network, const GraphDataset& ds,
                           const SupervisionMask& mask, double gamma_graph) {
  std::vector<ForwardTrace> traces;
  traces.reserve(static_cast<std::size_t>(ds.num_vertices()));
  for (int v = 0; v < ds.num_vertices(); ++v)
    traces.push_back(feedforward(network, ds.input_density(v)));
  return losses_from_traces(traces, ds, mask, gamma_graph);
}

// ---------------------------------------------------------------------
// Update generators
// ---------------------------------------------------------------------

Mat update_commutator_supervised(const NetworkState& network, const DensityMatrix& rho_in,
                                 const PureState& target, int layer, int j) {
  return full_space_commutator(network, rho_in.matrix, target.projector(), layer, j);
}

Mat update_commutator_pair(const NetworkState& network, const DensityMatrix& rho_in_v,
                           const DensityMatrix& rho_in_w, const DensityMatrix& rho_out_v,
                           const DensityMatrix& rho_out_w, int layer, int j) {
  return full_space_commutator(network, rho_in_v.matrix - rho_in_w.matrix,
                               rho_out_v.matrix - rho_out_w.matrix, layer, j);
}

std::vector<int> generator_support(const NetworkTopology& topology, int layer, int j) {
  check_perceptron_index(topology, layer, j);
  const int off_prev = topology.register_offset(layer);
  const int m_prev = topology.widths[static_cast<std::size_t>(layer)];
  std::vector<int> keep(static_cast<std::size_t>(m_prev) + 1);
  for (int q = 0; q < m_prev; ++q) keep[static_cast<std::size_t>(q)] = off_prev + q;
  keep[static_cast<std::size_t>(m_prev)] = topology.register_offset(layer + 1) + j;
  return keep;
}

namespace {

struct SignalCheck {
  bool use_supervised;
  bool use_graph;
};

SignalCheck training_signal(const SupervisionMask& mask, const Hyperparams& hyper) {
  SignalCheck s{!mask.supervised.empty(), hyper.gamma_graph != 0.0};
  if (!s.use_supervised && !s.use_graph)
    throw std::invalid_argument(
        "no training signal: no supervised vertices and the graph weight is zero");
  return s;
}

// Operators on each register obtained by pulling an output-register operator
// back through the layers' adjoint channels; entry [t] lives on register t.
std::vector<Mat> backward_ops(const NetworkState& network, const Mat& seed_on_output) {
  const int layers = network.topology.num_unitary_layers();
  std::vector<Mat> ops(static_cast<std::size_t>(layers) + 1);
  ops[static_cast<std::size_t>(layers)] = seed_on_output;
  for (int t = layers - 1; t >= 1; --t)
    ops[static_cast<std::size_t>(t)] = adjoint_layer_channel(
        ops[static_cast<std::size_t>(t) + 1], network.perceptrons[static_cast<std::size_t>(t)]);
  return ops;
}

// Accumulated tr_rest sums for every perceptron of one layer, reduced
// two-register path. Returns {supervised_sum[j], graph_sum[j]} where the
// graph sum already carries the adjacency weights of the ordered pair sum.
struct LayerSums {
  std::vector<Mat> supervised;
  std::vector<Mat> graph;
};

LayerSums layer_sums_reduced(const NetworkState& network, const GraphDataset& ds,
                             const SupervisionMask& mask, const std::vector<ForwardTrace>& traces,
                             const SignalCheck& signal,
                             const std::vector<std::vector<Mat>>& sigma_supervised,
                             const std::vector<std::vector<Mat>>& sigma_outputs, int layer) {
  const auto& topo = network.topology;
  const int m_prev = topo.widths[static_cast<std::size_t>(layer)];
  const int m = topo.widths[static_cast<std::size_t>(layer) + 1];
  const int two_reg = m_prev + m;
  const Eigen::Index d_prev = dim_for_qubits(m_prev);
  const int n_vertices = ds.num_vertices();

  const EmbeddedLayer emb = embed_layer(network.perceptrons[static_cast<std::size_t>(layer)], m_prev);
  const Mat ancilla = zero_projector(m);
  const Mat id_prev = Mat::Identity(d_prev, d_prev);

  // Forward operators per vertex, conjugated incrementally up to the
  // current perceptron; only vertices that feed some term are materialized.
  std::vector<bool> vertex_needed(static_cast<std::size_t>(n_vertices), signal.use_graph);
  if (signal.use_supervised)
    for (int u : mask.supervised) vertex_needed[static_cast<std::size_t>(u)] = true;

  std::vector<Mat> forward(static_cast<std::size_t>(n_vertices));
  for (int v = 0; v < n_vertices; ++v)
    if (vertex_needed[static_cast<std::size_t>(v)])
      forward[static_cast<std::size_t>(v)] =
          tensor_product(traces[static_cast<std::size_t>(v)].states[static_cast<std::size_t>(layer)].matrix,
                         ancilla);

  // Backward operators conjugated by the perceptrons after j, for every j.
  auto backward_ladder = [&](const Mat& sigma_next) {
    std::vector<Mat> ladder(static_cast<std::size_t>(m));
    ladder[static_cast<std::size_t>(m) - 1] = tensor_product(id_prev, sigma_next);
    for (int j = m - 2; j >= 0; --j)
      ladder[static_cast<std::size_t>(j)] =
          emb.embedded[static_cast<std::size_t>(j) + 1].adjoint() *
          ladder[static_cast<std::size_t>(j) + 1] * emb.embedded[static_cast<std::size_t>(j) + 1];
    return ladder;
  };

  std::vector<std::vector<Mat>> back_sv;
  if (signal.use_supervised) {
    back_sv.reserve(mask.supervised.size());
    for (std::size_t iu = 0; iu < mask.supervised.size(); ++iu)
      back_sv.push_back(backward_ladder(sigma_supervised[iu][static_cast<std::size_t>(layer) + 1]));
  }
  std::vector<std::vector<Mat>> back_out;
  if (signal.use_graph) {
    back_out.resize(static_cast<std::size_t>(n_vertices));
    for (int v = 0; v < n_vertices; ++v)
      back_out[static_cast<std::size_t>(v)] =
          backward_ladder(sigma_outputs[static_cast<std::size_t>(v)][static_cast<std::size_t>(layer) + 1]);
  }

  const Eigen::Index d_gen = dim_for_qubits(m_prev + 1);
  LayerSums sums;
  sums.supervised.assign(static_cast<std::size_t>(m), Mat::Zero(d_gen, d_gen));
  sums.graph.assign(static_cast<std::size_t>(m), Mat::Zero(d_gen, d_gen));

  for (int j = 0; j < m; ++j) {
    const Mat& u = emb.embedded[static_cast<std::size_t>(j)];
    for (int v = 0; v < n_vertices; ++v)
      if (vertex_needed[static_cast<std::size_t>(v)])
        forward[static_cast<std::size_t>(v)] = u * forward[static_cast<std::size_t>(v)] * u.adjoint();

    std::vector<int> keep(static_cast<std::size_t>(m_prev) + 1);
    for (int q = 0; q < m_prev; ++q) keep[static_cast<std::size_t>(q)] = q;
    keep[static_cast<std::size_t>(m_prev)] = m_prev + j;

    if (signal.use_supervised) {
      for (std::size_t iu = 0; iu < mask.supervised.size(); ++iu) {
        const int uvx = mask.supervised[iu];
        Mat comm = commutator(forward[static_cast<std::size_t>(uvx)], back_sv[iu][static_cast<std::size_t>(j)]);
        sums.supervised[static_cast<std::size_t>(j)] += partial_trace_matrix(comm, two_reg, keep);
      }
    }
    if (signal.use_graph) {
      // The pair commutator is symmetric under swapping the pair, so the
      // ordered double sum is twice the sum over v < w.
      for (int v = 0; v < n_vertices; ++v) {
        for (int w = v + 1; w < n_vertices; ++w) {
          const double a = ds.adjacency(v, w);
          if (a == 0.0) continue;
          Mat comm = commutator(
              forward[static_cast<std::size_t>(v)] - forward[static_cast<std::size_t>(w)],
              back_out[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)] -
                  back_out[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)]);
          sums.graph[static_cast<std::size_t>(j)] += (2.0 * a) * partial_trace_matrix(comm, two_reg, keep);
        }
      }
    }
  }
  return sums;
}

LayerSums layer_sums_full(const NetworkState& network, const GraphDataset& ds,
                          const SupervisionMask& mask, const std::vector<ForwardTrace>& traces,
                          const SignalCheck& signal, int layer) {
  const auto& topo = network.topology;
  const int n_tot = topo.total_qubits();
  const int m_prev = topo.widths[static_cast<std::size_t>(layer)];
  const int m = topo.widths[static_cast<std::size_t>(layer) + 1];
  const Eigen::Index d_gen = dim_for_qubits(m_prev + 1);
  const int n_vertices = ds.num_vertices();

  LayerSums sums;
  sums.supervised.assign(static_cast<std::size_t>(m), Mat::Zero(d_gen, d_gen));
  sums.graph.assign(static_cast<std::size_t>(m), Mat::Zero(d_gen, d_gen));

  for (int j = 0; j < m; ++j) {
    const std::vector<int> keep = generator_support(topo, layer, j);
    if (signal.use_supervised) {
      for (int u : mask.supervised) {
        Mat comm = update_commutator_supervised(network, ds.input_density(u),
                                                ds.targets[static_cast<std::size_t>(u)], layer, j);
        sums.supervised[static_cast<std::size_t>(j)] += partial_trace_matrix(comm, n_tot, keep);
      }
    }
    if (signal.use_graph) {
      for (int v = 0; v < n_vertices; ++v) {
        for (int w = v + 1; w < n_vertices; ++w) {
          const double a = ds.adjacency(v, w);
          if (a == 0.0) continue;
          Mat comm = update_commutator_pair(network, ds.input_density(v), ds.input_density(w),
                                            traces[static_cast<std::size_t>(v)].output(),
                                            traces[static_cast<std::size_t>(w)].output(), layer, j);
          sums.graph[static_cast<std::size_t>(j)] += (2.0 * a) * partial_trace_matrix(comm, n_tot, keep);
        }
      }
    }
  }
  return sums;
}

HermitianOperator assemble_generator(const Mat& supervised_sum, const Mat& graph_sum, int m_prev,
                                     int support_qubits, const SupervisionMask& mask,
                                     const Hyperparams& hyper, const SignalCheck& signal) {
  const double dim_prev = static_cast<double>(Eigen::Index{1} << m_prev);
  Mat k = Mat::Zero(supervised_sum.rows(), supervised_sum.cols());
  const Complex i_unit(0.0, 1.0);
  if (signal.use_supervised)
    k += (dim_prev * i_unit / static_cast<double>(mask.supervised.size())) * supervised_sum;
  if (signal.use_graph) k += (hyper.gamma_graph * 2.0 * dim_prev) * i_unit * graph_sum;
  k *= hyper.eta;
  return HermitianOperator(support_qubits, std::move(k));
}

std::vector<std::vector<Mat>> supervised_backward_traces(const NetworkState& network,
                                                         const GraphDataset& ds,
                                                         const SupervisionMask& mask) {
  std::vector<std::vector<Mat>> out;
  out.reserve(mask.supervised.size());
  for (int u : mask.supervised)
    out.push_back(backward_ops(network, ds.targets[static_cast<std::size_t>(u)].projector()));
  return out;
}

std::vector<std::vector<Mat>> output_backward_traces(const NetworkState& network,
                                                     const std::vector<ForwardTrace>& traces) {
  std::vector<std::vector<Mat>> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(backward_ops(network, t.output().matrix));
  return out;
}

}  // namespace

HermitianOperator update_generator(const NetworkState& network, const GraphDataset& ds,
                                   const SupervisionMask& mask,
                                   const std::vector<ForwardTrace>& traces, const Hyperparams& hyper,
                                   int layer, int j, GeneratorEval eval) {
  check_perceptron_index(network.topology, layer, j);
  const SignalCheck signal = training_signal(mask, hyper);
  const int m_prev = network.topology.widths[static_cast<std::size_t>(layer)];

  LayerSums sums;
  if (eval == GeneratorEval::FullSpace) {
    sums = layer_sums_full(network, ds, mask, traces, signal, layer);
  } else {
    const auto sigma_sv = signal.use_supervised ? supervised_backward_traces(network, ds, mask)
                                                : std::vector<std::vector<Mat>>{};
    const auto sigma_out =
        signal.use_graph ? output_backward_traces(network, traces) : std::vector<std::vector<Mat>>{};
    sums = layer_sums_reduced(network, ds, mask, traces, signal, sigma_sv, sigma_out, layer);
  }
  return assemble_generator(sums.supervised[static_cast<std::size_t>(j)],
                            sums.graph[static_cast<std::size_t>(j)], m_prev, m_prev + 1, mask, hyper,
                            signal);
}

std::vector<std::vector<HermitianOperator>> all_update_generators(
    const NetworkState& network, const GraphDataset& ds, const SupervisionMask& mask,
    const std::vector<ForwardTrace>& traces, const Hyperparams& hyper, GeneratorEval eval) {
  const auto& topo = network.topology;
  const SignalCheck signal = training_signal(mask, hyper);

  std::vector<std::vector<Mat>> sigma_sv;
  std::vector<std::vector<Mat>> sigma_out;
  if (eval == GeneratorEval::TwoLayerReduced) {
    if (signal.use_supervised) sigma_sv = supervised_backward_traces(network, ds, mask);
    if (signal.use_graph) sigma_out = output_backward_traces(network, traces);
  }

  std::vector<std::vector<HermitianOperator>> generators(
      static_cast<std::size_t>(topo.num_unitary_layers()));
  for (int l = 0; l < topo.num_unitary_layers(); ++l) {
    const int m_prev = topo.widths[static_cast<std::size_t>(l)];
    const int m = topo.widths[static_cast<std::size_t>(l) + 1];
    LayerSums sums = (eval == GeneratorEval::FullSpace)
                         ? layer_sums_full(network, ds, mask, traces, signal, l)
                         : layer_sums_reduced(network, ds, mask, traces, signal, sigma_sv, sigma_out, l);
    auto& layer_gens = generators[static_cast<std::size_t>(l)];
    layer_gens.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
      layer_gens.push_back(assemble_generator(sums.supervised[static_cast<std::size_t>(j)],
                                              sums.graph[static_cast<std::size_t>(j)], m_prev,
                                              m_prev + 1, mask, hyper, signal));
  }
  return generators;
}

NetworkState apply_update(const NetworkState& network,
                          const std::vector<std::vector<HermitianOperator>>& generators,
                          double epsilon) {
  NetworkState updated = network;
  for (std::size_t l = 0; l < updated.perceptrons.size(); ++l)
    for (std::size_t j = 0; j < updated.perceptrons[l].size(); ++j)
      updated.perceptrons[l][j] =
          expm_i_hermitian(generators.at(l).at(j), epsilon) * network.perceptrons[l][j];
  return updated;
}

// ---------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------

std::pair<NetworkState, LossRecord> update_step(const NetworkState& network, const GraphDataset& ds,
                                                const SupervisionMask& mask, const Hyperparams& hyper,
                                                GeneratorEval eval) {
  hyper.validate();
  std::vector<ForwardTrace> traces;
  traces.reserve(static_cast<std::size_t>(ds.num_vertices()));
  for (int v = 0; v < ds.num_vertices(); ++v)
    traces.push_back(feedforward(network, ds.input_density(v)));

  LossRecord record = losses_from_traces(traces, ds, mask, hyper.gamma_graph);
  auto generators = all_update_generators(network, ds, mask, traces, hyper, eval);
  return {apply_update(network, generators, hyper.epsilon), record};
}

TrainingTrace train(const NetworkState& initial, const GraphDataset& ds, const SupervisionMask& mask,
                    const Hyperparams& hyper, GeneratorEval eval) {
  hyper.validate();
  if (mask.num_total() != ds.num_vertices())
    throw std::invalid_argument("train: mask size does not match dataset");

  TrainingTrace trace;
  trace.hyper = hyper;
  trace.mask = mask;
  trace.records.reserve(static_cast<std::size_t>(hyper.rounds) + 1);

  NetworkState current = initial;
  for (int round = 0; round < hyper.rounds; ++round) {
    auto [next, record] = update_step(current, ds, mask, hyper, eval);
    record.step_index = round;
    trace.records.push_back(record);
    current = std::move(next);

    if (hyper.plateau_stop && round >= hyper.plateau_window) {
      const double before =
          trace.records[static_cast<std::size_t>(round - hyper.plateau_window)].l_combined;
      const double improvement = record.l_combined - before;
      if (improvement < hyper.plateau_rel_tol * std::max(std::abs(before), 1.0)) break;
    }
  }

  LossRecord final_record = evaluate_losses(current, ds, mask, hyper.gamma_graph);
  final_record.step_index = static_cast<int>(trace.records.size());
  trace.records.push_back(final_record);
  trace.final_network = std::move(current);
  return trace;
}

// ---------------------------------------------------------------------
// Supervised-count sweep
// ---------------------------------------------------------------------

Rng sweep_shot_rng(std::uint64_t master_seed, int s, int shot) {
  return child_rng(master_seed, {kSweepStreamTag, static_cast<std::uint64_t>(s),
                                 static_cast<std::uint64_t>(shot)});
}

std::vector<SweepRow> sweep_supervised(const std::function<GraphDataset(Rng&)>& dataset_builder,
                                       const NetworkTopology& topology, const Hyperparams& hyper,
                                       const std::vector<int>& s_values, std::size_t jobs) {
  hyper.validate();
  if (s_values.empty()) throw std::invalid_argument("sweep_supervised: no supervised counts given");

  struct ShotResult {
    double training_sv = 0.0, training_graph = 0.0, testing_sv = 0.0, testing_graph = 0.0;
  };
  const std::size_t shots = static_cast<std::size_t>(hyper.shots);
  std::vector<ShotResult> slots(s_values.size() * shots);

  auto run_shot = [&](std::size_t task) {
    const std::size_t si = task / shots;
    const std::size_t shot = task % shots;
    const int s = s_values[si];

    Rng rng = sweep_shot_rng(hyper.seed, s, static_cast<int>(shot));
    GraphDataset ds = dataset_builder(rng);
    SupervisionMask mask = select_supervised(ds.num_vertices(), s, rng);
    NetworkState net0 = init_network(topology, rng);

    Hyperparams arm_sv = hyper;
    arm_sv.gamma_graph = 0.0;
    TrainingTrace trace_sv = train(net0, ds, mask, arm_sv);

    TrainingTrace trace_graph = train(net0, ds, mask, hyper);

    ShotResult& out = slots[task];
    out.training_sv = trace_sv.records.back().l_sv;
    out.training_graph = trace_graph.records.back().l_sv;
    out.testing_sv = trace_sv.records.back().l_usv;
    out.testing_graph = trace_graph.records.back().l_usv;
  };

  const std::size_t n_tasks = slots.size();
  std::size_t n_workers = jobs == 0 ? std::thread::hardware_concurrency() : jobs;
  if (n_workers == 0) n_workers = 1;
  n_workers = std::min(n_workers, n_tasks);

  if (n_workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_shot(t);
  } else {
    std::atomic<std::size_t> next_task{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t t = next_task.fetch_add(1);
          if (t >= n_tasks) return;
          try {
            run_shot(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<SweepRow> rows;
  rows.reserve(s_values.size());
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    SweepRow row;
    row.s = s_values[si];
    for (std::size_t shot = 0; shot < shots; ++shot) {
      const ShotResult& r = slots[si * shots + shot];
      row.mean_training_sv += r.training_sv;
      row.mean_training_graph += r.training_graph;
      row.mean_testing_sv += r.testing_sv;
      row.mean_testing_graph += r.testing_graph;
    }
    const double inv = 1.0 / static_cast<double>(shots);
    row.mean_training_sv *= inv;
    row.mean_training_graph *= inv;
    row.mean_testing_sv *= inv;
    row.mean_testing_graph *= inv;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------
// Finite-difference validation
// ---------------------------------------------------------------------

double analytic_directional_derivative(const NetworkState& network, const GraphDataset& ds,
                                       const SupervisionMask& mask, const Hyperparams& hyper,
                                       const std::vector<std::vector<HermitianOperator>>& generators) {
  const SignalCheck signal = training_signal(mask, hyper);
  const auto& topo = network.topology;
  const int n_tot = topo.total_qubits();
  const Complex i_unit(0.0, 1.0);

  std::vector<ForwardTrace> traces;
  traces.reserve(static_cast<std::size_t>(ds.num_vertices()));
  for (int v = 0; v < ds.num_vertices(); ++v)
    traces.push_back(feedforward(network, ds.input_density(v)));

  double derivative = 0.0;
  for (int l = 0; l < topo.num_unitary_layers(); ++l) {
    for (int j = 0; j < topo.widths[static_cast<std::size_t>(l) + 1]; ++j) {
      const std::vector<int> keep = generator_support(topo, l, j);
      Mat grad = Mat::Zero(dim_for_qubits(static_cast<int>(keep.size())),
                           dim_for_qubits(static_cast<int>(keep.size())));
      if (signal.use_supervised) {
        Mat sum = Mat::Zero(grad.rows(), grad.cols());
        for (int u : mask.supervised) {
          Mat comm = update_commutator_supervised(network, ds.input_density(u),
                                                  ds.targets[static_cast<std::size_t>(u)], l, j);
          sum += partial_trace_matrix(comm, n_tot, keep);
        }
        grad += (i_unit / static_cast<double>(mask.supervised.size())) * sum;
      }
      if (signal.use_graph) {
        Mat sum = Mat::Zero(grad.rows(), grad.cols());
        for (int v = 0; v < ds.num_vertices(); ++v) {
          for (int w = v + 1; w < ds.num_vertices(); ++w) {
            const double a = ds.adjacency(v, w);
            if (a == 0.0) continue;
            Mat comm = update_commutator_pair(network, ds.input_density(v), ds.input_density(w),
                                              traces[static_cast<std::size_t>(v)].output(),
                                              traces[static_cast<std::size_t>(w)].output(), l, j);
            sum += (2.0 * a) * partial_trace_matrix(comm, n_tot, keep);
          }
        }
        grad += hyper.gamma_graph * 2.0 * i_unit * sum;
      }
      derivative += (grad * generators.at(static_cast<std::size_t>(l))
                                .at(static_cast<std::size_t>(j))
                                .matrix)
                        .trace()
                        .real();
    }
  }
  return derivative;
}

GradientCheckReport finite_difference_check(const NetworkState& network, const GraphDataset& ds,
                                            const SupervisionMask& mask, const Hyperparams& hyper,
                                            const std::vector<double>& probe_epsilons) {
  hyper.validate();
  std::vector<ForwardTrace> traces;
  traces.reserve(static_cast<std::size_t>(ds.num_vertices()));
  for (int v = 0; v < ds.num_vertices(); ++v)
    traces.push_back(feedforward(network, ds.input_density(v)));

  const auto generators = all_update_generators(network, ds, mask, traces, hyper);

  GradientCheckReport report;
  report.analytic_derivative = analytic_directional_derivative(network, ds, mask, hyper, generators);
  report.loss_at_start = losses_from_traces(traces, ds, mask, hyper.gamma_graph).l_combined;

  for (double eps : probe_epsilons) {
    if (eps <= 0.0) throw std::invalid_argument("finite_difference_check: probe epsilon must be > 0");
    NetworkState probed = apply_update(network, generators, eps);
    const double loss = evaluate_losses(probed, ds, mask, hyper.gamma_graph).l_combined;
    GradientCheckProbe probe;
    probe.epsilon = eps;
    probe.fd_derivative = (loss - report.loss_at_start) / eps;
    probe.residual_abs = std::abs(probe.fd_derivative - report.analytic_derivative);
    probe.residual_rel =
        probe.residual_abs / std::max(std::abs(report.analytic_derivative), 1e-15);
    report.probes.push_back(probe);
  }

  // Least-squares slope of log(residual) against log(epsilon).
  if (report.probes.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(report.probes.size());
    for (const auto& p : report.probes) {
      const double x = std::log(p.epsilon);
      const double y = std::log(std::max(p.residual_abs, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

}  // namespace qnngl
