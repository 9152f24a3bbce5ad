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

#include <vector>

#include "qnngl/linalg.hpp"
#include "qnngl/rng.hpp"
#include "qnngl/types.hpp"

namespace qnngl {

// Dissipative feed-forward network of quantum perceptrons. Each unitary
// layer maps the register of the previous layer onto a fresh register of
// |0...0> ancillas and traces the previous register out, so the network as
// a whole is a composition of completely positive trace-preserving maps.

struct NetworkTopology {
  // Qubit count per layer: input, hidden layers, output.
  std::vector<int> widths;

  NetworkTopology() = default;
  explicit NetworkTopology(std::vector<int> w) : widths(std::move(w)) { validate(); }

  void validate() const {
    if (widths.size() < 2)
      throw std::invalid_argument("topology needs at least input and output layers");
    for (int w : widths)
      if (w < 1) throw std::invalid_argument("every layer width must be >= 1");
  }

  // Unitary layers sit between consecutive registers; layer l (0-based)
  // maps widths[l] qubits onto widths[l+1] qubits.
  int num_unitary_layers() const { return static_cast<int>(widths.size()) - 1; }
  int total_qubits() const {
    int n = 0;
    for (int w : widths) n += w;
    return n;
  }
  // First qubit of register `layer` within the full network register.
  int register_offset(int layer) const {
    int off = 0;
    for (int k = 0; k < layer; ++k) off += widths[static_cast<std::size_t>(k)];
    return off;
  }
};

struct NetworkState {
  NetworkTopology topology;
  // perceptrons[l][j]: unitary on widths[l]+1 qubits acting on all of
  // register l plus qubit j of register l+1. Within a layer the perceptrons
  // are applied in index order, j = 0 first.
  std::vector<std::vector<Mat>> perceptrons;

  void validate(double unitarity_tol = defaults::unitarity_tol) const;
};

// Per-layer states of one input fed through the network; states[0] is the
// input, states.back() the network output.
struct ForwardTrace {
  std::vector<DensityMatrix> states;
  const DensityMatrix& output() const { return states.back(); }
};

// Haar-random perceptrons of the correct dimensions, drawn layer by layer,
// perceptron by perceptron.
NetworkState init_network(const NetworkTopology& topology, Rng& rng);

// Perceptrons of one layer embedded into the (prev + current) two-register
// space, plus their ordered product. Cached per layer while a network state
// is in use.
struct EmbeddedLayer {
  int width_prev = 0;
  int width = 0;
  std::vector<Mat> embedded;  // embedded[j] on width_prev + width qubits
  Mat product;                // embedded[m-1] * ... * embedded[0]
};
EmbeddedLayer embed_layer(const std::vector<Mat>& layer_perceptrons, int width_prev);

// One layer-to-layer channel: tensor fresh |0...0> ancillas, apply the
// layer's perceptrons in order, trace out the previous register. The output
// trace is renormalized only when float drift exceeds `trace_drift_tol`;
// eigenvalues are never clipped.
DensityMatrix layer_channel(const DensityMatrix& state_prev, const std::vector<Mat>& layer_perceptrons,
                            double trace_drift_tol = defaults::trace_drift_tol);

// Adjoint of layer_channel with respect to the Hilbert-Schmidt pairing:
// tr(sigma * E(X)) == tr(adjoint_layer_channel(sigma) * X). Propagates
// operators on the layer's register back onto the previous register.
Mat adjoint_layer_channel(const Mat& sigma, const std::vector<Mat>& layer_perceptrons);

// Runs the input through every layer, storing all intermediate states.
ForwardTrace feedforward(const NetworkState& network, const DensityMatrix& rho_in);

// Final state of feedforward.
DensityMatrix network_output(const NetworkState& network, const DensityMatrix& rho_in);

// Output computed in one shot on the full network register (input tensor
// all ancillas, every perceptron embedded globally, then everything but the
// output register traced out). Exponential in total qubits; retained as the
// reference the layered path is checked against.
DensityMatrix network_output_global(const NetworkState& network, const DensityMatrix& rho_in);

// All perceptrons embedded into the full network register, in application
// order (layer by layer, perceptron by perceptron).
std::vector<Mat> embed_network_global(const NetworkState& network);

}  // namespace qnngl
