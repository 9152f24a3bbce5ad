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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnngl/errors.hpp"

namespace qnngl {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;

// Default tolerances. Every check that uses one of these accepts the
// tolerance as a parameter; these are only the defaults.
namespace defaults {
inline constexpr double equality_tol = 1e-10;
inline constexpr double hermiticity_tol = 1e-10;
inline constexpr double unitarity_tol = 1e-8;
inline constexpr double norm_tol = 1e-10;
inline constexpr double trace_drift_tol = 1e-12;
inline constexpr double psd_floor = -1e-9;
inline constexpr double real_part_tol = 1e-12;
}  // namespace defaults

// Hilbert-space dimension of an n-qubit register.
inline Eigen::Index dim_for_qubits(int num_qubits) {
  if (num_qubits < 0 || num_qubits >= 31)
    throw std::invalid_argument("qubit count out of range: " + std::to_string(num_qubits));
  return Eigen::Index{1} << num_qubits;
}

// Largest absolute entry (L-infinity on entries).
inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Entrywise comparison with an explicit absolute tolerance.
inline bool approx_equal(const Mat& a, const Mat& b, double tol = defaults::equality_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

inline bool is_hermitian(const Mat& m, double tol = defaults::hermiticity_tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint().eval()) <= tol;
}

inline bool is_unitary(const Mat& m, double tol = defaults::unitarity_tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs((m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).eval()) <= tol;
}

// Normalized state vector of an n-qubit register. Qubit 0 is the
// slowest-varying (leftmost) tensor factor throughout the library.
struct PureState {
  int num_qubits = 0;
  Vec amplitudes;

  PureState() = default;
  PureState(int n, Vec amps, double tol = defaults::norm_tol)
      : num_qubits(n), amplitudes(std::move(amps)) {
    if (amplitudes.size() != dim_for_qubits(n))
      throw std::invalid_argument("pure state amplitude count does not match qubit count");
    if (std::abs(amplitudes.norm() - 1.0) > tol)
      throw InvariantViolation("pure state is not normalized");
  }

  // Builds a state from arbitrary (nonzero) amplitudes, dividing by the norm.
  static PureState normalized(int n, const Vec& amps) {
    double norm = amps.norm();
    if (norm <= 0.0) throw std::invalid_argument("cannot normalize a zero vector");
    return PureState(n, amps / norm);
  }

  static PureState basis_state(int n, Eigen::Index index) {
    Vec v = Vec::Zero(dim_for_qubits(n));
    v(index) = 1.0;
    return PureState(n, std::move(v));
  }

  Eigen::Index dim() const { return amplitudes.size(); }

  // Rank-one projector |psi><psi|.
  Mat projector() const { return amplitudes * amplitudes.adjoint(); }
};

// Positive semidefinite, unit-trace operator on an n-qubit register.
struct DensityMatrix {
  int num_qubits = 0;
  Mat matrix;

  DensityMatrix() = default;

  // Unchecked construction; used on internal paths where the invariants
  // hold by construction. Use `checked` for untrusted input.
  DensityMatrix(int n, Mat m) : num_qubits(n), matrix(std::move(m)) {
    if (matrix.rows() != dim_for_qubits(n) || matrix.cols() != matrix.rows())
      throw std::invalid_argument("density matrix dimension does not match qubit count");
  }

  static DensityMatrix checked(int n, Mat m, double herm_tol = defaults::hermiticity_tol,
                               double trace_tol = defaults::equality_tol,
                               double psd_floor = defaults::psd_floor) {
    DensityMatrix rho(n, std::move(m));
    for (const std::string& v : rho.violations(herm_tol, trace_tol, psd_floor))
      throw InvariantViolation("density matrix: " + v);
    return rho;
  }

  static DensityMatrix projector(const PureState& psi) {
    return DensityMatrix(psi.num_qubits, psi.projector());
  }

  static DensityMatrix maximally_mixed(int n) {
    Eigen::Index d = dim_for_qubits(n);
    return DensityMatrix(n, Mat::Identity(d, d) / static_cast<double>(d));
  }

  Eigen::Index dim() const { return matrix.rows(); }
  double trace_real() const { return matrix.trace().real(); }

  // Invariant check; returns human-readable violations (empty when valid).
  std::vector<std::string> violations(double herm_tol = defaults::hermiticity_tol,
                                      double trace_tol = defaults::equality_tol,
                                      double psd_floor = defaults::psd_floor) const {
    std::vector<std::string> out;
    if (!is_hermitian(matrix, herm_tol)) out.push_back("not Hermitian");
    if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > trace_tol)
      out.push_back("trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < psd_floor) out.push_back("negative eigenvalue");
    return out;
  }
};

// Hermitian operator on an n-qubit register (update generators, observables).
struct HermitianOperator {
  int num_qubits = 0;
  Mat matrix;

  HermitianOperator() = default;
  HermitianOperator(int n, Mat m, double tol = defaults::hermiticity_tol)
      : num_qubits(n), matrix(std::move(m)) {
    if (matrix.rows() != dim_for_qubits(n) || matrix.cols() != matrix.rows())
      throw std::invalid_argument("operator dimension does not match qubit count");
    if (!is_hermitian(matrix, tol)) throw InvariantViolation("operator is not Hermitian");
  }

  Eigen::Index dim() const { return matrix.rows(); }
};

// Real expansion coefficients of a Hermitian operator over tensor products
// of the single-qubit basis {I, X, Y, Z}. Word w is read base-4, most
// significant digit first: digit i selects the factor acting on qubit i.
struct PauliCoefficients {
  int num_qubits = 0;
  Eigen::VectorXd coefficients;

  PauliCoefficients() = default;
  PauliCoefficients(int n, Eigen::VectorXd c) : num_qubits(n), coefficients(std::move(c)) {
    Eigen::Index expected = 1;
    for (int i = 0; i < n; ++i) expected *= 4;
    if (coefficients.size() != expected)
      throw std::invalid_argument("coefficient count must be 4^n");
  }
};

}  // namespace qnngl
