// Copyright 2026 The obsdecomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace obsdecomp {

using cx = std::complex<double>;
// Row-major so that .data() is the row-major entry array and the circuit
// kernels can stream over it directly.
using MatrixC =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;

inline std::int64_t dim_of(int n_qubits) { return std::int64_t{1} << n_qubits; }

/// Dense 2^n x 2^n complex operator. Holds observables, states as density
/// matrices, and circuit unitaries alike.
struct DenseOperator {
  int n_qubits = 0;
  MatrixC entries;

  DenseOperator() = default;
  DenseOperator(int n, MatrixC m);

  std::int64_t dim() const { return dim_of(n_qubits); }
  bool is_hermitian(double tol = 1e-10) const;

  static DenseOperator identity(int n_qubits);
  static DenseOperator zero(int n_qubits);
};

/// Pure n-qubit state; amplitudes indexed with qubit 1 as the most
/// significant bit. Construction enforces unit norm.
struct StateVector {
  int n_qubits = 0;
  VectorC amplitudes;

  StateVector() = default;
  StateVector(int n, VectorC amps);

  std::int64_t dim() const { return dim_of(n_qubits); }

  static StateVector computational_basis(int n_qubits, std::int64_t index);
};

/// Diagonal observable in the computational basis: the Lambda of a
/// decomposition term. Imaginary parts are identically zero when it came
/// from a Hermitian target.
struct DiagObservable {
  int n_qubits = 0;
  VectorC values;

  DiagObservable() = default;
  DiagObservable(int n, VectorC v);

  std::int64_t dim() const { return dim_of(n_qubits); }
  /// Spectral norm of a diagonal matrix: max modulus over entries.
  double spectral_norm() const;
  double frobenius_norm() const;
};

// -- norms and projections ----------------------------------------------

double frobenius_norm(const DenseOperator& a);

/// Largest singular value via power iteration on A^dag A from a seeded
/// deterministic start, converging on successive Rayleigh quotients.
/// Throws std::runtime_error if the iteration cap is exhausted.
double spectral_norm(const DenseOperator& a, double tol = 1e-8,
                     int max_iters = 10000);

DiagObservable diag_of(const DenseOperator& a);

/// U A U^dag. Requires U unitary within 1e-8 in Frobenius norm.
DenseOperator conjugate(const DenseOperator& a, const DenseOperator& u);

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending and
/// eigenvectors as the columns of the returned operator.
std::pair<VectorR, DenseOperator> hermitian_eig(const DenseOperator& a);

/// Born-rule distribution p(b) = |<b|U|psi>|^2 over the 2^n bitstrings.
VectorR born_distribution(const StateVector& psi, const DenseOperator& u);

// -- small helpers shared across modules --------------------------------

inline cx expectation(const StateVector& psi, const DenseOperator& a) {
  return (psi.amplitudes.adjoint() * a.entries * psi.amplitudes)(0);
}

}  // namespace obsdecomp
