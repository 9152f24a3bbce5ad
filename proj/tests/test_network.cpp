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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qnngl/network.hpp"

using namespace qnngl;
using qnngl::testing::random_density;
using qnngl::testing::random_hermitian;

namespace {

NetworkState identity_network(const NetworkTopology& topo) {
  NetworkState net;
  net.topology = topo;
  for (int l = 0; l < topo.num_unitary_layers(); ++l) {
    const Eigen::Index d = dim_for_qubits(topo.widths[static_cast<std::size_t>(l)] + 1);
    net.perceptrons.emplace_back(
        static_cast<std::size_t>(topo.widths[static_cast<std::size_t>(l) + 1]), Mat::Identity(d, d));
  }
  return net;
}

Mat zero_state(int qubits) {
  return DensityMatrix::projector(PureState::basis_state(qubits, 0)).matrix;
}

}  // namespace

TEST_CASE("network initialization: dimensions and determinism") {
  Rng rng(1);
  NetworkState net = init_network(NetworkTopology({3, 1}), rng);
  REQUIRE(net.perceptrons.size() == 1);
  REQUIRE(net.perceptrons[0].size() == 1);
  CHECK(net.perceptrons[0][0].rows() == 16);
  CHECK_NOTHROW(net.validate());

  NetworkState tiny = init_network(NetworkTopology({1, 1}), rng);
  CHECK(tiny.perceptrons[0][0].rows() == 4);

  Rng a(77), b(77);
  NetworkState n1 = init_network(NetworkTopology({2, 3, 1}), a);
  NetworkState n2 = init_network(NetworkTopology({2, 3, 1}), b);
  for (std::size_t l = 0; l < n1.perceptrons.size(); ++l)
    for (std::size_t j = 0; j < n1.perceptrons[l].size(); ++j)
      CHECK(approx_equal(n1.perceptrons[l][j], n2.perceptrons[l][j], 0.0));

  CHECK_THROWS_AS(NetworkTopology({3}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkTopology({3, 0}), std::invalid_argument);
}

TEST_CASE("layer channel: identity perceptrons map everything to the ancilla state") {
  Rng rng(5);
  NetworkState net = identity_network(NetworkTopology({2, 2}));
  DensityMatrix in = random_density(2, rng);
  DensityMatrix out = layer_channel(in, net.perceptrons[0]);
  CHECK(approx_equal(out.matrix, zero_state(2), 1e-12));
}

TEST_CASE("layer channel: SWAP perceptron moves the input onto the output qubit") {
  Mat swap(4, 4);
  swap << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  Rng rng(9);
  for (int t = 0; t < 4; ++t) {
    DensityMatrix in = random_density(1, rng);
    DensityMatrix out = layer_channel(in, {swap});
    CHECK(approx_equal(out.matrix, in.matrix, 1e-12));
  }
}

TEST_CASE("layer channel: CPTP contract for random layers and inputs") {
  Rng rng(13);
  for (int t = 0; t < 6; ++t) {
    const int m_prev = 1 + static_cast<int>(uniform_index(rng, 2));
    const int m = 1 + static_cast<int>(uniform_index(rng, 2));
    std::vector<Mat> layer;
    for (int j = 0; j < m; ++j) layer.push_back(haar_random_unitary(dim_for_qubits(m_prev + 1), rng));
    DensityMatrix in = random_density(m_prev, rng);
    DensityMatrix out = layer_channel(in, layer);
    CHECK(std::abs(out.trace_real() - 1.0) <= 1e-10);
    CHECK(is_hermitian(out.matrix, 1e-10));
    Eigen::SelfAdjointEigenSolver<Mat> es(out.matrix, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("feedforward: boundary cases and stored intermediate states") {
  Rng rng(17);

  SUBCASE("no hidden layers stores exactly input and output") {
    NetworkState net = init_network(NetworkTopology({2, 1}), rng);
    DensityMatrix in = random_density(2, rng);
    ForwardTrace trace = feedforward(net, in);
    REQUIRE(trace.states.size() == 2);
    CHECK(approx_equal(trace.states[0].matrix, in.matrix, 0.0));
    CHECK(trace.output().num_qubits == 1);
  }

  SUBCASE("identity perceptrons: every post-input state is the ancilla projector") {
    NetworkState net = identity_network(NetworkTopology({2, 2, 2}));
    DensityMatrix in = random_density(2, rng);
    ForwardTrace trace = feedforward(net, in);
    REQUIRE(trace.states.size() == 3);
    CHECK(approx_equal(trace.states[1].matrix, zero_state(2), 1e-12));
    CHECK(approx_equal(trace.states[2].matrix, zero_state(2), 1e-12));
  }

  SUBCASE("every stored state has unit trace") {
    NetworkState net = init_network(NetworkTopology({2, 3, 1}), rng);
    ForwardTrace trace = feedforward(net, random_density(2, rng));
    for (const auto& s : trace.states) CHECK(std::abs(s.trace_real() - 1.0) <= 1e-10);
  }

  SUBCASE("input width mismatch is rejected") {
    NetworkState net = init_network(NetworkTopology({2, 1}), rng);
    CHECK_THROWS_AS(feedforward(net, random_density(3, rng)), std::invalid_argument);
  }
}

TEST_CASE("layered feedforward equals the one-shot full-register evaluation") {
  Rng rng(21);
  for (const auto& widths : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {1, 2, 1}, {2, 2, 1}, {2, 3, 1}, {1, 1, 1, 1}}) {
    NetworkState net = init_network(NetworkTopology(widths), rng);
    DensityMatrix in = random_density(widths.front(), rng);
    DensityMatrix layered = network_output(net, in);
    DensityMatrix global = network_output_global(net, in);
    CAPTURE(widths);
    CHECK(approx_equal(layered.matrix, global.matrix, 1e-10));
  }
}

TEST_CASE("perceptron application order is the ascending index order") {
  // Two non-commuting perceptrons on a 1 -> 2 layer: a CNOT controlled by
  // the input qubit and a Hadamard on the same input qubit.
  Mat cnot(4, 4);
  cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  Mat hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  Mat h_x = tensor_product(hadamard, pauli_matrix(1));

  Mat emb1 = embed_unitary(cnot, 3, {0, 1});
  Mat emb2 = embed_unitary(h_x, 3, {0, 2});

  DensityMatrix in = DensityMatrix::projector(PureState::basis_state(1, 0));
  Mat joint = tensor_product(in.matrix, zero_state(2));

  Mat in_order = emb2 * emb1 * joint * emb1.adjoint() * emb2.adjoint();
  Mat reversed = emb1 * emb2 * joint * emb2.adjoint() * emb1.adjoint();
  Mat expected = qnngl::testing::oracle_partial_trace(in_order, 3, {1, 2});
  Mat wrong = qnngl::testing::oracle_partial_trace(reversed, 3, {1, 2});
  REQUIRE(!approx_equal(expected, wrong, 1e-6));

  DensityMatrix out = layer_channel(in, {cnot, h_x});
  CHECK(approx_equal(out.matrix, expected, 1e-12));
  CHECK(!approx_equal(out.matrix, wrong, 1e-6));
}

TEST_CASE("adjoint layer channel satisfies the pairing identity") {
  Rng rng(25);
  for (int t = 0; t < 5; ++t) {
    const int m_prev = 1 + static_cast<int>(uniform_index(rng, 2));
    const int m = 1 + static_cast<int>(uniform_index(rng, 2));
    std::vector<Mat> layer;
    for (int j = 0; j < m; ++j) layer.push_back(haar_random_unitary(dim_for_qubits(m_prev + 1), rng));

    DensityMatrix x = random_density(m_prev, rng);
    HermitianOperator sigma = random_hermitian(m, rng);

    const double lhs = (sigma.matrix * layer_channel(x, layer).matrix).trace().real();
    const double rhs = (adjoint_layer_channel(sigma.matrix, layer) * x.matrix).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}
