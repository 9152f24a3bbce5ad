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

#include "qnngl/rng.hpp"
#include "qnngl/types.hpp"

namespace qnngl {

// Dense complex linear algebra specialized to multi-qubit registers.
// Convention: qubit 0 is the slowest-varying (leftmost) tensor factor,
// i.e. basis index b = bit(q0) << (n-1) | ... | bit(q_{n-1}).

// Kronecker product; a's index varies slowest.
Mat tensor_product(const Mat& a, const Mat& b);

// Reduced operator on the qubits listed in `keep`, in the listed order;
// all other qubits are traced out. Works for any square operator on
// `total_qubits` qubits (density matrices, commutators, ...).
Mat partial_trace_matrix(const Mat& op, int total_qubits, const std::vector<int>& keep);

// Density-matrix wrapper around partial_trace_matrix.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Lifts a unitary on |targets| qubits to a unitary on `total_qubits` qubits
// that acts as `u` on the targets (target i of u's register = qubit
// targets[i]) and as the identity elsewhere.
Mat embed_unitary(const Mat& u, int total_qubits, const std::vector<int>& targets,
                  double unitarity_tol = defaults::unitarity_tol);

// <phi|rho|phi>, clamped to [0, 1].
double fidelity(const PureState& phi, const DensityMatrix& rho,
                double real_tol = defaults::real_part_tol);

// Squared overlap |<a|b>|^2 of two pure states.
double squared_overlap(const PureState& a, const PureState& b);

// Hilbert-Schmidt distance tr((rho - sigma)^2).
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                   double real_tol = defaults::real_part_tol);

// exp(i * epsilon * K) for Hermitian K, via eigendecomposition (unitary to
// machine precision, which matters over long multiplicative update chains).
Mat expm_i_hermitian(const Mat& k, double epsilon,
                     double hermiticity_tol = defaults::hermiticity_tol);
inline Mat expm_i_hermitian(const HermitianOperator& k, double epsilon) {
  return expm_i_hermitian(k.matrix, epsilon);
}

// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
// diagonal phases folded back into Q.
Mat haar_random_unitary(Eigen::Index dim, Rng& rng);

// State with i.i.d. complex Gaussian amplitudes, normalized.
PureState random_pure_state(int num_qubits, Rng& rng);

// ab - ba.
Mat commutator(const Mat& a, const Mat& b);

// Single-qubit basis {I, X, Y, Z} indexed 0..3.
const Mat& pauli_matrix(int index);

// Tensor product selected by the base-4 digits of `word` (most significant
// digit acts on qubit 0).
Mat pauli_word_matrix(int num_qubits, Eigen::Index word);

// Expansion of a Hermitian operator over Pauli words: coefficient(w) =
// tr(h * sigma_w) / 2^n. pauli_reconstruct is the exact inverse.
PauliCoefficients pauli_expand(const HermitianOperator& h,
                               double real_tol = defaults::hermiticity_tol);
HermitianOperator pauli_reconstruct(const PauliCoefficients& coeffs);

}  // namespace qnngl
