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

#include "obsdecomp/workloads.hpp"

#include <bit>
#include <cmath>

#include "doctest.h"
#include "obsdecomp/pauli.hpp"
#include "oracles.hpp"

using namespace obsdecomp;

namespace {

std::int64_t count_nonzeros(const DenseOperator& a) {
  std::int64_t count = 0;
  for (Eigen::Index r = 0; r < a.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.entries.cols(); ++c) {
      if (a.entries(r, c) != cx(0.0, 0.0)) {
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("gen_sparse_hamiltonian structural contract") {
  const DenseOperator single = gen_sparse_hamiltonian({2, 1, 1.0, 7});
  CHECK(count_nonzeros(single) == 1);
  bool on_diagonal = false;
  for (int i = 0; i < 4; ++i) {
    if (single.entries(i, i) != cx(0.0, 0.0)) {
      on_diagonal = true;
      CHECK(single.entries(i, i).imag() == 0.0);
    }
  }
  CHECK(on_diagonal);

  const SparseHamiltonianSpec spec{3, 9, 2.5, 123};
  const DenseOperator a = gen_sparse_hamiltonian(spec);
  const DenseOperator b = gen_sparse_hamiltonian(spec);
  CHECK((a.entries - b.entries).norm() == 0.0);

  CHECK(a.is_hermitian(1e-12));
  CHECK(count_nonzeros(a) == 9);
  CHECK(frobenius_norm(a) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("gen_sparse_hamiltonian rejects infeasible patterns") {
  CHECK_THROWS_AS(gen_sparse_hamiltonian({1, 17, 1.0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_sparse_hamiltonian({2, 0, 1.0, 0}),
                  std::invalid_argument);
}

TEST_CASE("ground_state on Pauli observables") {
  const auto [ez, psi_z] = ground_state(to_dense(PauliString("Z")));
  CHECK(ez == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(psi_z.amplitudes(1)) == doctest::Approx(1.0).epsilon(1e-12));

  const auto [ex, psi_x] = ground_state(to_dense(PauliString("X")));
  CHECK(ex == doctest::Approx(-1.0).epsilon(1e-12));
  VectorC expected(2);
  expected << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(std::abs(expected.dot(psi_x.amplitudes)) ==
        doctest::Approx(1.0).epsilon(1e-10));

  const DenseOperator h = gen_sparse_hamiltonian({3, 12, 1.0, 5});
  const auto [e, psi] = ground_state(h);
  CHECK((h.entries * psi.amplitudes - e * psi.amplitudes).norm() <=
        1e-7 * frobenius_norm(h));
}

TEST_CASE("slater_state on axis-aligned unitaries") {
  SlaterSpec spec;
  spec.n_modes = 3;
  spec.tau = 1;
  spec.unitary = MatrixC::Identity(3, 3);
  const StateVector one = slater_state(spec);
  CHECK(std::abs(one.amplitudes(4) - cx(1.0, 0.0)) < 1e-12);  // |100>

  spec.tau = 2;
  const StateVector two = slater_state(spec);
  CHECK(std::abs(two.amplitudes(6)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slater_state at full filling leaves only |1...1>") {
  const SlaterSpec spec = make_slater_spec(3, 3, 77);
  const StateVector full = slater_state(spec);
  CHECK(std::abs(full.amplitudes(7)) == doctest::Approx(1.0).epsilon(1e-10));
  for (int b = 0; b < 7; ++b) {
    CHECK(std::abs(full.amplitudes(b)) < 1e-10);
  }
}

TEST_CASE("slater_state conserves particle number") {
  for (int tau = 1; tau <= 3; ++tau) {
    const SlaterSpec spec = make_slater_spec(4, tau, 100 + tau);
    const StateVector phi = slater_state(spec);
    CHECK(std::abs(phi.amplitudes.norm() - 1.0) < 1e-10);
    for (std::int64_t b = 0; b < phi.dim(); ++b) {
      if (std::popcount(static_cast<std::uint64_t>(b)) != tau) {
        CHECK(std::abs(phi.amplitudes(b)) < 1e-12);
      }
    }
  }
}

TEST_CASE("slater_state depends only on the occupied subspace") {
  const int n = 3, tau = 2;
  const SlaterSpec spec = make_slater_spec(n, tau, 555);

  // Left-multiply the occupied rows by a random tau x tau unitary.
  SlaterSpec mixed = spec;
  const MatrixC w = random_unitary(tau, 556);
  MatrixC rows = spec.unitary.topRows(tau);
  mixed.unitary.topRows(tau) = w * rows;

  const StateVector a = slater_state(spec);
  const StateVector b = slater_state(mixed);
  CHECK(std::abs(a.amplitudes.dot(b.amplitudes)) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("slater_state validates tau") {
  SlaterSpec spec = make_slater_spec(3, 1, 1);
  spec.tau = 4;
  CHECK_THROWS_AS(slater_state(spec), std::invalid_argument);
}

TEST_CASE("ancilla_superposition layout") {
  const StateVector zero = StateVector::computational_basis(1, 0);
  const StateVector prep = ancilla_superposition(zero);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(prep.amplitudes(0) - cx(r, 0)) < 1e-12);
  CHECK(std::abs(prep.amplitudes(2) - cx(r, 0)) < 1e-12);

  const StateVector psi = random_state(3, 9);
  const StateVector prep2 = ancilla_superposition(psi);
  CHECK(prep2.amplitudes(0).real() == doctest::Approx(r).epsilon(1e-12));
  CHECK(std::abs(prep2.amplitudes.norm() - 1.0) < 1e-12);
}

TEST_CASE("inner_product_operator structure") {
  const StateVector zero = StateVector::computational_basis(1, 0);
  const DenseOperator o = inner_product_operator(zero);
  CHECK(o.n_qubits == 2);
  CHECK(std::abs(o.entries(2, 0) - cx(1.0, 0.0)) < 1e-15);
  CHECK(count_nonzeros(o) == 1);

  const StateVector phi = random_state(2, 10);
  const DenseOperator o2 = inner_product_operator(phi);
  CHECK(frobenius_norm(o2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((o2.entries.adjoint() * o2.entries).trace().real() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the ancilla construction reproduces inner products exactly") {
  for (int tau = 1; tau <= 2; ++tau) {
    const StateVector psi = random_state(3, 600 + tau);
    const StateVector phi = slater_state(make_slater_spec(3, tau, 700 + tau));

    const StateVector prep = ancilla_superposition(psi);
    const DenseOperator o = inner_product_operator(phi);

    const cx via_operator = 2.0 * expectation(prep, o);
    const cx direct = psi.amplitudes.dot(phi.amplitudes);
    CHECK(std::abs(via_operator - direct) < 1e-12);
  }
}

TEST_CASE("hermitian_split identities") {
  const DenseOperator h = oracles::random_hermitian(2, 11);
  const auto [h1, h2] = hermitian_split(h);
  CHECK((h1.entries - h.entries).norm() < 1e-12);
  CHECK(frobenius_norm(h2) < 1e-12);

  MatrixC i_eye = cx(0, 1) * MatrixC::Identity(4, 4);
  const auto [g1, g2] = hermitian_split(DenseOperator(2, i_eye));
  CHECK(frobenius_norm(g1) < 1e-12);
  CHECK((g2.entries - MatrixC::Identity(4, 4)).norm() < 1e-12);

  const DenseOperator o = oracles::random_matrix(2, 12);
  const auto [r1, r2] = hermitian_split(o);
  CHECK(r1.is_hermitian(1e-12));
  CHECK(r2.is_hermitian(1e-12));
  const MatrixC recombined = r1.entries + cx(0, 1) * r2.entries;
  CHECK((recombined - o.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("run_benchmark sparse workload produces the full structure") {
  BenchConfig cfg;
  cfg.workload = "sparse";
  cfg.n = 3;
  cfg.depth = 1;
  cfg.max_terms = 10;
  cfg.eps1 = 0.05;
  cfg.eps2 = 0.2;
  cfg.delta = 0.2;
  cfg.instance_seed = 42;
  cfg.experiment_seed = 43;
  cfg.optimizer.restarts = 2;
  cfg.optimizer.max_iters = 100;
  cfg.shots = {500};
  cfg.repetitions = 10;
  cfg.nnz = 9;
  cfg.magnitude_scale = 1.0;

  const BenchOutput out = run_benchmark(cfg);
  CHECK(out.rows.size() == 10);
  for (std::size_t k = 1; k < out.decomposition.residual_fro.size(); ++k) {
    CHECK(out.decomposition.residual_fro[k] <=
          out.decomposition.residual_fro[k - 1] + 1e-12);
  }
  REQUIRE(out.budgets.size() == 1);
  CHECK(out.budgets[0].shots == 500);
  CHECK(out.budgets[0].ci95_lo <= out.budgets[0].mean_abs_error + 1e-12);
  CHECK(out.budgets[0].ci95_hi >= out.budgets[0].mean_abs_error - 1e-12);
  // Ground energy is the exact expectation for the sparse workload.
  const DenseOperator h = gen_sparse_hamiltonian({3, 9, 1.0, 42});
  const auto [e0, psi0] = ground_state(h);
  (void)psi0;
  CHECK(out.exact.real() == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("run_benchmark inner-product workload matches the direct overlap") {
  BenchConfig cfg;
  cfg.workload = "inner_product";
  cfg.n = 3;
  cfg.tau = 1;
  cfg.depth = 1;
  cfg.max_terms = 12;
  cfg.eps1 = 0.1;
  cfg.eps2 = 0.3;
  cfg.delta = 0.2;
  cfg.instance_seed = 21;
  cfg.experiment_seed = 22;
  cfg.optimizer.restarts = 2;
  cfg.optimizer.max_iters = 100;
  cfg.shots = {400};
  cfg.repetitions = 3;

  const BenchOutput out = run_benchmark(cfg);
  CHECK(out.rows.size() == 3);

  const StateVector phi = slater_state(make_slater_spec(3, 1, 21));
  const StateVector psi = random_state(3, derive_seed(21, 1));
  const cx direct = psi.amplitudes.dot(phi.amplitudes);
  CHECK(std::abs(2.0 * out.exact - direct) < 1e-12);
}

TEST_CASE("run_benchmark dry run skips estimation") {
  BenchConfig cfg;
  cfg.workload = "sparse";
  cfg.n = 2;
  cfg.depth = 0;
  cfg.max_terms = 4;
  cfg.eps1 = 0.1;
  cfg.eps2 = 0.2;
  cfg.delta = 0.2;
  cfg.instance_seed = 1;
  cfg.experiment_seed = 2;
  cfg.optimizer.restarts = 1;
  cfg.optimizer.max_iters = 60;
  cfg.nnz = 4;
  cfg.dry_run = true;
  cfg.shots = {100};

  const BenchOutput out = run_benchmark(cfg);
  CHECK(out.rows.empty());
  CHECK(out.budgets.empty());
  CHECK(out.decomposition.residual_fro.size() ==
        out.decomposition.terms.size() + 1);
}
