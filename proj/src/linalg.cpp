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

#include "qnngl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qnngl {

Mat tensor_product(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

void check_qubit_list(int total_qubits, const std::vector<int>& qubits, const char* what) {
  if (qubits.empty()) throw std::invalid_argument(std::string(what) + ": empty qubit list");
  std::vector<bool> seen(static_cast<std::size_t>(total_qubits), false);
  for (int q : qubits) {
    if (q < 0 || q >= total_qubits)
      throw std::invalid_argument(std::string(what) + ": qubit index " + std::to_string(q) +
                                  " out of range for " + std::to_string(total_qubits) + " qubits");
    if (seen[static_cast<std::size_t>(q)])
      throw std::invalid_argument(std::string(what) + ": duplicate qubit index " + std::to_string(q));
    seen[static_cast<std::size_t>(q)] = true;
  }
}

// Bit of qubit q inside a basis index of an n-qubit register.
inline Eigen::Index qubit_bit(int n, int q) { return Eigen::Index{1} << (n - 1 - q); }

}  // namespace

Mat partial_trace_matrix(const Mat& op, int total_qubits, const std::vector<int>& keep) {
  Eigen::Index dim = dim_for_qubits(total_qubits);
  if (op.rows() != dim || op.cols() != dim)
    throw std::invalid_argument("partial_trace: operator dimension does not match qubit count");
  check_qubit_list(total_qubits, keep, "partial_trace");

  const int n_keep = static_cast<int>(keep.size());
  std::vector<int> traced;
  {
    std::vector<bool> kept(static_cast<std::size_t>(total_qubits), false);
    for (int q : keep) kept[static_cast<std::size_t>(q)] = true;
    for (int q = 0; q < total_qubits; ++q)
      if (!kept[static_cast<std::size_t>(q)]) traced.push_back(q);
  }
  const int n_traced = static_cast<int>(traced.size());

  const Eigen::Index out_dim = Eigen::Index{1} << n_keep;
  const Eigen::Index sum_dim = Eigen::Index{1} << n_traced;

  // Precompute the register index contributed by each kept/traced sub-index.
  std::vector<Eigen::Index> keep_bits(static_cast<std::size_t>(n_keep));
  for (int i = 0; i < n_keep; ++i)
    keep_bits[static_cast<std::size_t>(i)] = qubit_bit(total_qubits, keep[static_cast<std::size_t>(i)]);
  std::vector<Eigen::Index> traced_bits(static_cast<std::size_t>(n_traced));
  for (int i = 0; i < n_traced; ++i)
    traced_bits[static_cast<std::size_t>(i)] =
        qubit_bit(total_qubits, traced[static_cast<std::size_t>(i)]);

  auto expand = [](Eigen::Index sub, const std::vector<Eigen::Index>& bits) {
    Eigen::Index full = 0;
    const int m = static_cast<int>(bits.size());
    for (int i = 0; i < m; ++i)
      if ((sub >> (m - 1 - i)) & 1) full |= bits[static_cast<std::size_t>(i)];
    return full;
  };

  std::vector<Eigen::Index> keep_index(static_cast<std::size_t>(out_dim));
  for (Eigen::Index a = 0; a < out_dim; ++a) keep_index[static_cast<std::size_t>(a)] = expand(a, keep_bits);
  std::vector<Eigen::Index> traced_index(static_cast<std::size_t>(sum_dim));
  for (Eigen::Index r = 0; r < sum_dim; ++r)
    traced_index[static_cast<std::size_t>(r)] = expand(r, traced_bits);

  Mat out = Mat::Zero(out_dim, out_dim);
  for (Eigen::Index a = 0; a < out_dim; ++a) {
    for (Eigen::Index b = 0; b < out_dim; ++b) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index r = 0; r < sum_dim; ++r) {
        Eigen::Index rest = traced_index[static_cast<std::size_t>(r)];
        acc += op(keep_index[static_cast<std::size_t>(a)] | rest,
                  keep_index[static_cast<std::size_t>(b)] | rest);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Mat reduced = partial_trace_matrix(rho.matrix, rho.num_qubits, keep);
  return DensityMatrix(static_cast<int>(keep.size()), std::move(reduced));
}

Mat embed_unitary(const Mat& u, int total_qubits, const std::vector<int>& targets,
                  double unitarity_tol) {
  check_qubit_list(total_qubits, targets, "embed_unitary");
  const int t = static_cast<int>(targets.size());
  const Eigen::Index small_dim = Eigen::Index{1} << t;
  if (u.rows() != small_dim || u.cols() != small_dim)
    throw std::invalid_argument("embed_unitary: matrix dimension does not match target count");
  if (!is_unitary(u, unitarity_tol)) throw InvariantViolation("embed_unitary: input is not unitary");

  const Eigen::Index dim = dim_for_qubits(total_qubits);
  std::vector<Eigen::Index> target_bits(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i)
    target_bits[static_cast<std::size_t>(i)] = qubit_bit(total_qubits, targets[static_cast<std::size_t>(i)]);

  auto extract = [&](Eigen::Index full) {
    Eigen::Index sub = 0;
    for (int i = 0; i < t; ++i)
      if (full & target_bits[static_cast<std::size_t>(i)]) sub |= Eigen::Index{1} << (t - 1 - i);
    return sub;
  };
  auto inject = [&](Eigen::Index base, Eigen::Index sub) {
    Eigen::Index full = base;
    for (int i = 0; i < t; ++i)
      if ((sub >> (t - 1 - i)) & 1) full |= target_bits[static_cast<std::size_t>(i)];
    return full;
  };

  Eigen::Index target_mask = 0;
  for (Eigen::Index bit : target_bits) target_mask |= bit;

  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Eigen::Index base = c & ~target_mask;
    const Eigen::Index tc = extract(c);
    for (Eigen::Index tr = 0; tr < small_dim; ++tr) out(inject(base, tr), c) = u(tr, tc);
  }
  return out;
}

double fidelity(const PureState& phi, const DensityMatrix& rho, double real_tol) {
  if (phi.dim() != rho.dim())
    throw std::invalid_argument("fidelity: state and density matrix dimensions differ");
  Complex val = (phi.amplitudes.adjoint() * rho.matrix * phi.amplitudes)(0, 0);
  if (std::abs(val.imag()) > real_tol)
    throw InvariantViolation("fidelity: expectation has a non-negligible imaginary part");
  return std::clamp(val.real(), 0.0, 1.0);
}

double squared_overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("squared_overlap: dimensions differ");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma, double real_tol) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("hs_distance: dimensions differ");
  Mat d = rho.matrix - sigma.matrix;
  Complex val = (d * d).trace();
  if (std::abs(val.imag()) > real_tol)
    throw InvariantViolation("hs_distance: trace has a non-negligible imaginary part");
  return std::max(val.real(), 0.0);
}

Mat expm_i_hermitian(const Mat& k, double epsilon, double hermiticity_tol) {
  if (!is_hermitian(k, hermiticity_tol))
    throw InvariantViolation("expm_i_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  Vec phases(k.rows());
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    phases(i) = std::exp(Complex(0.0, epsilon * es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat haar_random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("haar_random_unitary: dimension must be >= 1");
  Mat z(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) z(r, c) = standard_normal_complex(rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  Vec phase(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    phase(i) = d / std::abs(d);
  }
  return q * phase.asDiagonal();
}

PureState random_pure_state(int num_qubits, Rng& rng) {
  if (num_qubits < 1) throw std::invalid_argument("random_pure_state: need at least one qubit");
  Vec amps(dim_for_qubits(num_qubits));
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps(i) = standard_normal_complex(rng);
  return PureState::normalized(num_qubits, amps);
}

Mat commutator(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("commutator: matrices must be square with equal dimensions");
  return a * b - b * a;
}

const Mat& pauli_matrix(int index) {
  static const Mat table[4] = {
      (Mat(2, 2) << 1, 0, 0, 1).finished(),
      (Mat(2, 2) << 0, 1, 1, 0).finished(),
      (Mat(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Mat(2, 2) << 1, 0, 0, -1).finished(),
  };
  if (index < 0 || index > 3) throw std::invalid_argument("pauli_matrix: index must be 0..3");
  return table[index];
}

Mat pauli_word_matrix(int num_qubits, Eigen::Index word) {
  Mat out = Mat::Identity(1, 1);
  std::vector<int> digits(static_cast<std::size_t>(num_qubits));
  for (int q = num_qubits - 1; q >= 0; --q) {
    digits[static_cast<std::size_t>(q)] = static_cast<int>(word & 3);
    word >>= 2;
  }
  for (int q = 0; q < num_qubits; ++q)
    out = tensor_product(out, pauli_matrix(digits[static_cast<std::size_t>(q)]));
  return out;
}

PauliCoefficients pauli_expand(const HermitianOperator& h, double real_tol) {
  const int n = h.num_qubits;
  const Eigen::Index words = Eigen::Index{1} << (2 * n);
  const double dim = static_cast<double>(dim_for_qubits(n));
  Eigen::VectorXd coeffs(words);
  for (Eigen::Index w = 0; w < words; ++w) {
    Complex c = (h.matrix * pauli_word_matrix(n, w)).trace() / dim;
    if (std::abs(c.imag()) > real_tol)
      throw InvariantViolation("pauli_expand: coefficient has a non-negligible imaginary part");
    coeffs(w) = c.real();
  }
  return PauliCoefficients(n, std::move(coeffs));
}

HermitianOperator pauli_reconstruct(const PauliCoefficients& coeffs) {
  const int n = coeffs.num_qubits;
  const Eigen::Index dim = dim_for_qubits(n);
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index w = 0; w < coeffs.coefficients.size(); ++w) {
    if (coeffs.coefficients(w) == 0.0) continue;
    out += coeffs.coefficients(w) * pauli_word_matrix(n, w);
  }
  return HermitianOperator(n, std::move(out));
}

}  // namespace qnngl
