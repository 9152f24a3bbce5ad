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

namespace qnngl::testing {

// Random mixed state: convex mixture of a few random pure states.
inline DensityMatrix random_density(int num_qubits, Rng& rng, int rank = 3) {
  Eigen::Index d = dim_for_qubits(num_qubits);
  Mat rho = Mat::Zero(d, d);
  double total = 0.0;
  for (int k = 0; k < rank; ++k) {
    double p = uniform_unit(rng);
    rho += p * random_pure_state(num_qubits, rng).projector();
    total += p;
  }
  return DensityMatrix(num_qubits, rho / total);
}

inline HermitianOperator random_hermitian(int num_qubits, Rng& rng) {
  Eigen::Index d = dim_for_qubits(num_qubits);
  Mat a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = standard_normal_complex(rng);
  Mat h = (a + a.adjoint()) / 2.0;
  return HermitianOperator(num_qubits, std::move(h));
}

// Independent partial-trace oracle: walks every entry of the full operator
// and accumulates the ones whose traced bits coincide. Deliberately a
// different algorithm from the library implementation.
inline Mat oracle_partial_trace(const Mat& op, int total_qubits, const std::vector<int>& keep) {
  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  const int n_keep = static_cast<int>(keep.size());
  const Eigen::Index out_dim = Eigen::Index{1} << n_keep;

  auto bit_of = [&](Eigen::Index index, int qubit) {
    return (index >> (total_qubits - 1 - qubit)) & 1;
  };
  auto kept_sub = [&](Eigen::Index index) {
    Eigen::Index sub = 0;
    for (int i = 0; i < n_keep; ++i)
      sub |= bit_of(index, keep[static_cast<std::size_t>(i)]) << (n_keep - 1 - i);
    return sub;
  };
  auto traced_agree = [&](Eigen::Index r, Eigen::Index c) {
    for (int q = 0; q < total_qubits; ++q) {
      bool is_kept = false;
      for (int k : keep) is_kept = is_kept || k == q;
      if (!is_kept && bit_of(r, q) != bit_of(c, q)) return false;
    }
    return true;
  };

  Mat out = Mat::Zero(out_dim, out_dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (traced_agree(r, c)) out(kept_sub(r), kept_sub(c)) += op(r, c);
  return out;
}

}  // namespace qnngl::testing
