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

#include <string>
#include <vector>

#include "obsdecomp/decompose.hpp"
#include "obsdecomp/estimate.hpp"

namespace obsdecomp {

/// Random Hermitian with an exact number of stored nonzero entries.
/// An off-diagonal draw fills (i,j) and its conjugate (j,i), counting 2
/// toward nnz; a diagonal draw is real and counts 1.
struct SparseHamiltonianSpec {
  int n_qubits = 1;
  std::int64_t nnz = 1;
  double magnitude_scale = 1.0;
  std::uint64_t rng_seed = 0;
};

/// tau-fermion Slater determinant data: the first tau rows of the unitary
/// define the occupied rotated modes.
struct SlaterSpec {
  int n_modes = 1;
  int tau = 1;
  MatrixC unitary;
  std::uint64_t rng_seed = 0;
};

DenseOperator gen_sparse_hamiltonian(const SparseHamiltonianSpec& spec);

std::pair<double, StateVector> ground_state(const DenseOperator& h);

/// Haar-random n x n unitary (QR of a complex Ginibre draw).
MatrixC random_unitary(int n, std::uint64_t seed);

SlaterSpec make_slater_spec(int n_modes, int tau, std::uint64_t seed);

/// Jordan-Wigner realization of b~_1^dag ... b~_tau^dag |0^n> with
/// b~_k^dag = sum_j conj(U_kj) b_j^dag; qubit 1 is the leftmost mode.
StateVector slater_state(const SlaterSpec& spec);

/// (|0^{n+1}> + |1>|psi>) / sqrt(2); the ancilla is the new leftmost qubit.
StateVector ancilla_superposition(const StateVector& psi);

/// Rank-1 non-Hermitian operator |1>|phi><0^{n+1}| over n+1 qubits.
DenseOperator inner_product_operator(const StateVector& phi);

/// O = H1 + i H2 with H1 = (O + O^dag)/2 and H2 = -i (O - O^dag)/2.
std::pair<DenseOperator, DenseOperator> hermitian_split(const DenseOperator& o);

/// Random pure state with complex Gaussian amplitudes, normalized.
StateVector random_state(int n_qubits, std::uint64_t seed);

// -- benchmark driver ----------------------------------------------------

struct BenchConfig {
  std::string workload;  // "sparse" or "inner_product"
  int n = 2;
  int depth = 1;
  int max_terms = 10;
  double eps1 = 0.1;
  double eps2 = 0.1;
  double delta = 0.1;
  std::uint64_t instance_seed = 0;
  std::uint64_t experiment_seed = 0;
  OptimizerConfig optimizer;
  std::vector<std::int64_t> shots;
  int repetitions = 1;
  std::int64_t nnz = 0;            // sparse only
  double magnitude_scale = 1.0;    // sparse only
  int tau = 1;                     // inner_product only
  bool dry_run = false;
  int threads = 1;
};

struct BenchRow {
  std::int64_t shots_budget = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::int64_t shots_used = 0;
  int batches = 0;
  std::int64_t batch_size = 0;
  cx value;
  double abs_error = 0.0;
};

struct BudgetSummary {
  std::int64_t shots = 0;
  double mean_abs_error = 0.0;
  double ci95_lo = 0.0;  // bootstrap interval for the mean
  double ci95_hi = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double hit_rate = 0.0;  // fraction with error <= eps1 + eps2
};

struct BenchOutput {
  Decomposition decomposition;
  cx exact;        // tr(rho H), the true target
  cx exact_recon;  // tr(rho H_hat) against the reconstruction
  std::vector<BenchRow> rows;
  std::vector<BudgetSummary> budgets;
};

/// Target operator and input state of a workload config: the sparse
/// Hamiltonian with its ground state, or the rank-1 inner-product operator
/// with the ancilla-extended state.
struct WorkloadInstance {
  DenseOperator target;
  StateVector input_state;
};

WorkloadInstance build_workload_instance(const BenchConfig& cfg);

/// Runs one benchmark end to end: build the instance, decompose once
/// (repetitions share the deterministic decomposition), then estimate per
/// (budget, repetition) with seeds derived from the experiment seed.
BenchOutput run_benchmark(const BenchConfig& cfg);

}  // namespace obsdecomp
