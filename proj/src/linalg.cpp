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

#include "obsdecomp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "obsdecomp/rng.hpp"

namespace obsdecomp {

namespace {

void require_square_pow2(int n_qubits, const MatrixC& m) {
  if (n_qubits < 1) {
    throw std::invalid_argument("operator needs at least one qubit");
  }
  const std::int64_t d = dim_of(n_qubits);
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("operator dimension does not match 2^n");
  }
}

void require_same_dim(const DenseOperator& a, const DenseOperator& b) {
  if (a.n_qubits != b.n_qubits) {
    throw std::invalid_argument("operator dimension mismatch");
  }
}

void require_unitary(const DenseOperator& u, double tol) {
  const MatrixC gram = u.entries * u.entries.adjoint();
  const double dev =
      (gram - MatrixC::Identity(u.dim(), u.dim())).norm();
  if (dev > tol) {
    throw std::invalid_argument("matrix is not unitary within tolerance");
  }
}

}  // namespace

DenseOperator::DenseOperator(int n, MatrixC m) : n_qubits(n), entries(std::move(m)) {
  require_square_pow2(n_qubits, entries);
}

bool DenseOperator::is_hermitian(double tol) const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator DenseOperator::identity(int n_qubits) {
  const std::int64_t d = dim_of(n_qubits);
  return DenseOperator(n_qubits, MatrixC::Identity(d, d));
}

DenseOperator DenseOperator::zero(int n_qubits) {
  const std::int64_t d = dim_of(n_qubits);
  return DenseOperator(n_qubits, MatrixC::Zero(d, d));
}

StateVector::StateVector(int n, VectorC amps)
    : n_qubits(n), amplitudes(std::move(amps)) {
  if (n_qubits < 1 || amplitudes.size() != dim()) {
    throw std::invalid_argument("state dimension does not match 2^n");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

StateVector StateVector::computational_basis(int n_qubits, std::int64_t index) {
  VectorC amps = VectorC::Zero(dim_of(n_qubits));
  amps(index) = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

DiagObservable::DiagObservable(int n, VectorC v)
    : n_qubits(n), values(std::move(v)) {
  if (n_qubits < 1 || values.size() != dim()) {
    throw std::invalid_argument("diagonal length does not match 2^n");
  }
}

double DiagObservable::spectral_norm() const {
  return values.cwiseAbs().maxCoeff();
}

double DiagObservable::frobenius_norm() const { return values.norm(); }

double frobenius_norm(const DenseOperator& a) { return a.entries.norm(); }

double spectral_norm(const DenseOperator& a, double tol, int max_iters) {
  if (tol <= 0) {
    throw std::invalid_argument("spectral_norm tolerance must be positive");
  }
  const std::int64_t d = a.dim();
  const double fro = a.entries.norm();
  if (fro == 0.0) {
    return 0.0;
  }

  // Power iteration on A^dag A; the Rayleigh quotient of the normalized
  // iterate v is |A v|^2 and climbs to the squared top singular value.
  for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
    SplitMix64 rng(derive_seed(0x9d2c5680u, attempt));
    VectorC v(d);
    for (std::int64_t i = 0; i < d; ++i) {
      v(i) = cx(rng.next_double() - 0.5, rng.next_double() - 0.5);
    }
    v.normalize();

    double prev_rq = -1.0;
    for (int it = 0; it < max_iters; ++it) {
      const VectorC w = a.entries * v;
      const double rq = w.squaredNorm();
      if (rq == 0.0) {
        break;  // start vector lies in the null space; reseed
      }
      if (prev_rq >= 0.0 && std::abs(rq - prev_rq) <= tol * rq) {
        return std::sqrt(rq);
      }
      prev_rq = rq;
      v = a.entries.adjoint() * w;
      v.normalize();
    }
    if (prev_rq > 0.0) {
      throw std::runtime_error(
          "spectral_norm: power iteration did not converge");
    }
  }
  throw std::runtime_error("spectral_norm: power iteration did not converge");
}

DiagObservable diag_of(const DenseOperator& a) {
  return DiagObservable(a.n_qubits, a.entries.diagonal());
}

DenseOperator conjugate(const DenseOperator& a, const DenseOperator& u) {
  require_same_dim(a, u);
  require_unitary(u, 1e-8);
  MatrixC m = u.entries * a.entries * u.entries.adjoint();
  return DenseOperator(a.n_qubits, std::move(m));
}

std::pair<VectorR, DenseOperator> hermitian_eig(const DenseOperator& a) {
  if (!a.is_hermitian(1e-10)) {
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<MatrixC> solver(a.entries);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed");
  }
  return {solver.eigenvalues(),
          DenseOperator(a.n_qubits, solver.eigenvectors())};
}

VectorR born_distribution(const StateVector& psi, const DenseOperator& u) {
  if (psi.n_qubits != u.n_qubits) {
    throw std::invalid_argument("state/unitary dimension mismatch");
  }
  require_unitary(u, 1e-8);
  const VectorC evolved = u.entries * psi.amplitudes;
  return evolved.cwiseAbs2();
}

}  // namespace obsdecomp
