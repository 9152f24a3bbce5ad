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

#include "qnngl/network.hpp"

#include <cmath>

namespace qnngl {

namespace {

int qubits_of_dim(Eigen::Index dim, const char* what) {
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw std::invalid_argument(std::string(what) + ": dimension is not a power of two");
    d /= 2;
    ++n;
  }
  return n;
}

// Zero-ancilla projector |0...0><0...0| on `qubits` qubits.
Mat zero_projector(int qubits) {
  Eigen::Index d = dim_for_qubits(qubits);
  Mat p = Mat::Zero(d, d);
  p(0, 0) = 1.0;
  return p;
}

std::vector<int> perceptron_targets(int width_prev, int j) {
  std::vector<int> targets(static_cast<std::size_t>(width_prev) + 1);
  for (int q = 0; q < width_prev; ++q) targets[static_cast<std::size_t>(q)] = q;
  targets[static_cast<std::size_t>(width_prev)] = width_prev + j;
  return targets;
}

}  // namespace

void NetworkState::validate(double unitarity_tol) const {
  topology.validate();
  if (static_cast<int>(perceptrons.size()) != topology.num_unitary_layers())
    throw std::invalid_argument("network: perceptron layer count does not match topology");
  for (int l = 0; l < topology.num_unitary_layers(); ++l) {
    const auto& layer = perceptrons[static_cast<std::size_t>(l)];
    const int m_prev = topology.widths[static_cast<std::size_t>(l)];
    const int m = topology.widths[static_cast<std::size_t>(l) + 1];
    if (static_cast<int>(layer.size()) != m)
      throw std::invalid_argument("network: layer " + std::to_string(l) +
                                  " perceptron count does not match layer width");
    const Eigen::Index d = dim_for_qubits(m_prev + 1);
    for (const Mat& u : layer) {
      if (u.rows() != d || u.cols() != d)
        throw std::invalid_argument("network: perceptron dimension mismatch in layer " +
                                    std::to_string(l));
      if (!is_unitary(u, unitarity_tol))
        throw InvariantViolation("network: perceptron in layer " + std::to_string(l) +
                                 " is not unitary");
    }
  }
}

NetworkState init_network(const NetworkTopology& topology, Rng& rng) {
  topology.validate();
  NetworkState net;
  net.topology = topology;
  net.perceptrons.resize(static_cast<std::size_t>(topology.num_unitary_layers()));
  for (int l = 0; l < topology.num_unitary_layers(); ++l) {
    const int m_prev = topology.widths[static_cast<std::size_t>(l)];
    const int m = topology.widths[static_cast<std::size_t>(l) + 1];
    auto& layer = net.perceptrons[static_cast<std::size_t>(l)];
    layer.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) layer.push_back(haar_random_unitary(dim_for_qubits(m_prev + 1), rng));
  }
  return net;
}

EmbeddedLayer embed_layer(const std::vector<Mat>& layer_perceptrons, int width_prev) {
  if (layer_perceptrons.empty())
    throw std::invalid_argument("embed_layer: a layer needs at least one perceptron");
  EmbeddedLayer out;
  out.width_prev = width_prev;
  out.width = static_cast<int>(layer_perceptrons.size());
  const int total = out.width_prev + out.width;
  out.embedded.reserve(layer_perceptrons.size());
  for (int j = 0; j < out.width; ++j)
    out.embedded.push_back(embed_unitary(layer_perceptrons[static_cast<std::size_t>(j)], total,
                                         perceptron_targets(width_prev, j)));
  out.product = out.embedded[0];
  for (int j = 1; j < out.width; ++j) out.product = out.embedded[static_cast<std::size_t>(j)] * out.product;
  return out;
}

DensityMatrix layer_channel(const DensityMatrix& state_prev, const std::vector<Mat>& layer_perceptrons,
                            double trace_drift_tol) {
  if (layer_perceptrons.empty())
    throw std::invalid_argument("layer_channel: a layer needs at least one perceptron");
  const int width_prev = qubits_of_dim(layer_perceptrons[0].rows(), "layer_channel") - 1;
  if (state_prev.num_qubits != width_prev)
    throw std::invalid_argument("layer_channel: input state does not match perceptron width");
  const int width = static_cast<int>(layer_perceptrons.size());

  EmbeddedLayer layer = embed_layer(layer_perceptrons, width_prev);
  Mat joint = tensor_product(state_prev.matrix, zero_projector(width));
  joint = layer.product * joint * layer.product.adjoint();

  std::vector<int> keep(static_cast<std::size_t>(width));
  for (int q = 0; q < width; ++q) keep[static_cast<std::size_t>(q)] = width_prev + q;
  Mat reduced = partial_trace_matrix(joint, width_prev + width, keep);

  double trace = reduced.trace().real();
  if (std::abs(trace - 1.0) > trace_drift_tol) reduced /= trace;
  return DensityMatrix(width, std::move(reduced));
}

Mat adjoint_layer_channel(const Mat& sigma, const std::vector<Mat>& layer_perceptrons) {
  if (layer_perceptrons.empty())
    throw std::invalid_argument("adjoint_layer_channel: a layer needs at least one perceptron");
  const int width_prev = qubits_of_dim(layer_perceptrons[0].rows(), "adjoint_layer_channel") - 1;
  const int width = static_cast<int>(layer_perceptrons.size());
  if (sigma.rows() != dim_for_qubits(width) || sigma.cols() != sigma.rows())
    throw std::invalid_argument("adjoint_layer_channel: operator does not match layer width");

  EmbeddedLayer layer = embed_layer(layer_perceptrons, width_prev);
  Mat lifted = tensor_product(Mat::Identity(dim_for_qubits(width_prev), dim_for_qubits(width_prev)),
                              sigma);
  Mat back = layer.product.adjoint() * lifted * layer.product;

  // Pair with the fresh-ancilla state: keep the block where the layer
  // register is |0...0> on both sides.
  const Eigen::Index d_prev = dim_for_qubits(width_prev);
  const Eigen::Index d_layer = dim_for_qubits(width);
  Mat out(d_prev, d_prev);
  for (Eigen::Index a = 0; a < d_prev; ++a)
    for (Eigen::Index b = 0; b < d_prev; ++b) out(a, b) = back(a * d_layer, b * d_layer);
  return out;
}

ForwardTrace feedforward(const NetworkState& network, const DensityMatrix& rho_in) {
  if (rho_in.num_qubits != network.topology.widths.front())
    throw std::invalid_argument("feedforward: input does not match the input layer width");
  ForwardTrace trace;
  trace.states.reserve(network.topology.widths.size());
  trace.states.push_back(rho_in);
  for (const auto& layer : network.perceptrons)
    trace.states.push_back(layer_channel(trace.states.back(), layer));
  return trace;
}

DensityMatrix network_output(const NetworkState& network, const DensityMatrix& rho_in) {
  return feedforward(network, rho_in).output();
}

std::vector<Mat> embed_network_global(const NetworkState& network) {
  const auto& topo = network.topology;
  const int n_tot = topo.total_qubits();
  std::vector<Mat> out;
  for (int l = 0; l < topo.num_unitary_layers(); ++l) {
    const int off_prev = topo.register_offset(l);
    const int off = topo.register_offset(l + 1);
    const int m_prev = topo.widths[static_cast<std::size_t>(l)];
    const int m = topo.widths[static_cast<std::size_t>(l) + 1];
    for (int j = 0; j < m; ++j) {
      std::vector<int> targets(static_cast<std::size_t>(m_prev) + 1);
      for (int q = 0; q < m_prev; ++q) targets[static_cast<std::size_t>(q)] = off_prev + q;
      targets[static_cast<std::size_t>(m_prev)] = off + j;
      out.push_back(embed_unitary(network.perceptrons[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)],
                                  n_tot, targets));
    }
  }
  return out;
}

DensityMatrix network_output_global(const NetworkState& network, const DensityMatrix& rho_in) {
  const auto& topo = network.topology;
  if (rho_in.num_qubits != topo.widths.front())
    throw std::invalid_argument("network_output_global: input does not match the input layer width");
  const int n_tot = topo.total_qubits();
  const int ancillas = n_tot - topo.widths.front();

  Mat state = tensor_product(rho_in.matrix, zero_projector(ancillas));
  for (const Mat& u : embed_network_global(network)) state = u * state * u.adjoint();

  const int m_out = topo.widths.back();
  std::vector<int> keep(static_cast<std::size_t>(m_out));
  for (int q = 0; q < m_out; ++q) keep[static_cast<std::size_t>(q)] = n_tot - m_out + q;
  Mat reduced = partial_trace_matrix(state, n_tot, keep);
  double trace = reduced.trace().real();
  if (std::abs(trace - 1.0) > defaults::trace_drift_tol) reduced /= trace;
  return DensityMatrix(m_out, std::move(reduced));
}

}  // namespace qnngl
