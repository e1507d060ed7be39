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

// End-to-end acceptance suite. Each case prints one PASS/FAIL line; all
// tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "obsdecomp/bound.hpp"
#include "obsdecomp/estimate.hpp"
#include "obsdecomp/io.hpp"
#include "obsdecomp/pauli.hpp"
#include "obsdecomp/workloads.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace obsdecomp;
using Clock = std::chrono::steady_clock;

namespace {

void report(int id, const char* label, bool ok) {
  std::printf("[acceptance] criterion %d (%s): %s\n", id, label,
              ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  CHECK(ok);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PauliString random_nonidentity_string(int n, SplitMix64& rng) {
  std::vector<PauliLetter> letters(n);
  bool identity = true;
  do {
    identity = true;
    for (auto& l : letters) {
      l = static_cast<PauliLetter>(rng.next_u64() % 4);
      if (l != PauliLetter::I) {
        identity = false;
      }
    }
  } while (identity);
  return PauliString(letters);
}

}  // namespace

TEST_CASE("criteria 1 and 2: greedy convergence and Frobenius decay") {
  const auto t0 = Clock::now();
  const DenseOperator h = oracles::random_hermitian(4, 4242);
  REQUIRE(frobenius_norm(h) == doctest::Approx(1.0));

  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 150;
  cfg.rng_seed = 7;
  const Decomposition d =
      greedy_decompose(h, AnsatzSpec(4, 2), 1e-9, 30, cfg);
  const double elapsed = seconds_since(t0);

  bool monotone = true;
  for (std::size_t k = 1; k < d.residual_fro.size(); ++k) {
    monotone = monotone && d.residual_fro[k] <= d.residual_fro[k - 1];
  }
  const bool halved =
      d.residual_spec.back() <= 0.5 * d.residual_spec.front();
  const bool in_time = elapsed <= 300.0;
  CHECK(monotone);
  CHECK(halved);
  CHECK(in_time);
  report(1, "greedy convergence", monotone && halved && in_time);

  std::vector<double> ks, logs;
  for (std::size_t k = 0; k < d.residual_fro.size(); ++k) {
    if (d.residual_fro[k] > 0) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(d.residual_fro[k]));
    }
  }
  const auto [slope, r2] = oracles::linear_fit(ks, logs);
  CHECK(slope < 0.0);
  CHECK(r2 >= 0.8);
  report(2, "Frobenius decay", slope < 0.0 && r2 >= 0.8);
}

TEST_CASE("criterion 3: exact single-Pauli diagonalization at L = 0") {
  SplitMix64 rng(33);
  bool all_ok = true;
  for (int i = 0; i < 10; ++i) {
    const PauliString p = random_nonidentity_string(3, rng);
    OptimizerConfig cfg;
    cfg.restarts = 8;
    cfg.max_iters = 200;
    cfg.rng_seed = 100 + i;
    const Decomposition d =
        greedy_decompose(to_dense(p), AnsatzSpec(3, 0), 1e-6, 1, cfg);
    const bool ok =
        d.terms.size() == 1 && d.residual_spec.back() <= 1e-6;
    CHECK(ok);
    all_ok = all_ok && ok;
  }
  report(3, "single-Pauli diagonalization", all_ok);
}

TEST_CASE("criterion 4: estimator unbiasedness over 1e6 raw samples") {
  const auto t0 = Clock::now();
  const DenseOperator h = oracles::random_hermitian(3, 777);
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iters = 120;
  cfg.rng_seed = 778;
  const Decomposition d = greedy_decompose(h, AnsatzSpec(3, 1), 0.05, 12, cfg);
  const StateVector psi = random_state(3, 779);
  const SamplingPlan plan = make_plan(d);
  const double exact = expectation(psi, reconstruct(d)).real();

  const int draws = 1000000;
  SplitMix64 rng(780);
  double mean = 0.0, m2 = 0.0;
  for (int t = 1; t <= draws; ++t) {
    const double v = draw_sample(psi, d, plan, rng).real();
    const double delta = v - mean;
    mean += delta / t;
    m2 += delta * (v - mean);
  }
  const double std_dev = std::sqrt(m2 / (draws - 1));
  const double bound = 5.0 * std_dev / std::sqrt(static_cast<double>(draws));
  const double elapsed = seconds_since(t0);

  const bool unbiased = std::abs(mean - exact) <= bound;
  const bool in_time = elapsed <= 120.0;
  CHECK(unbiased);
  CHECK(in_time);
  report(4, "estimator unbiasedness", unbiased && in_time);
}

TEST_CASE("criterion 5: raw-sample variance within the l1 bound") {
  bool all_ok = true;
  int case_id = 0;
  for (int n = 1; n <= 3; ++n) {
    const int cases = (n < 3) ? 7 : 6;
    for (int i = 0; i < cases; ++i, ++case_id) {
      const DenseOperator h =
          oracles::random_hermitian(n, 9000 + case_id);
      OptimizerConfig cfg;
      cfg.restarts = 2;
      cfg.max_iters = 100;
      cfg.rng_seed = 9100 + case_id;
      const Decomposition d = greedy_decompose(
          h, AnsatzSpec(n, n > 1 ? 1 : 0), 0.05, 10, cfg);
      const StateVector psi = random_state(n, 9200 + case_id);
      const SamplingPlan plan = make_plan(d);
      const EstimateReport rep = estimate(psi, d, 0.1, 0.2, 9300 + case_id);
      const bool ok =
          rep.raw_sample_variance <= 1.05 * plan.l1_norm * plan.l1_norm;
      CHECK(ok);
      all_ok = all_ok && ok;
    }
  }
  report(5, "variance bound", all_ok);
}

TEST_CASE("criterion 6: end-to-end error contract on the Bell state") {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 150;
  cfg.rng_seed = 61;
  const Decomposition d = greedy_decompose(to_dense(PauliString("ZZ")),
                                           AnsatzSpec(2, 0), 1e-7, 8, cfg);
  REQUIRE(d.residual_spec.back() <= 1e-6);

  VectorC bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  const StateVector psi(2, bell);

  const double eps2 = 0.05;
  const double delta = 0.1;
  const int runs = 100;
  int misses = 0;
  for (int r = 0; r < runs; ++r) {
    const EstimateReport rep = estimate(psi, d, eps2, delta, 6000 + r);
    if (std::abs(rep.value.real() - 1.0) > eps2) {
      ++misses;
    }
  }
  const int allowed = 10 + static_cast<int>(
                               3.0 * std::sqrt(runs * delta * (1.0 - delta)));
  CHECK(misses <= allowed);
  report(6, "end-to-end error contract", misses <= allowed);
}

TEST_CASE("criterion 7: inner-product identity and sampled convergence") {
  bool identity_ok = true;
  int misses = 0;
  int runs = 0;
  const double eps1 = 0.04;
  const double eps2_est = 0.05;
  const double delta = 0.1;
  const double tolerance = 0.25;  // on the inner-product estimate 2v

  for (int i = 0; i < 20; ++i) {
    const int tau = 1 + (i % 2);
    const StateVector psi = random_state(3, 7100 + i);
    const StateVector phi = slater_state(make_slater_spec(3, tau, 7200 + i));
    const StateVector prep = ancilla_superposition(psi);
    const DenseOperator o = inner_product_operator(phi);

    const cx via_operator = 2.0 * expectation(prep, o);
    const cx direct = psi.amplitudes.dot(phi.amplitudes);
    const bool exact_ok = std::abs(via_operator - direct) < 1e-12;
    CHECK(exact_ok);
    identity_ok = identity_ok && exact_ok;

    OptimizerConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = 100;
    cfg.rng_seed = 7300 + i;
    const Decomposition d =
        greedy_decompose(o, AnsatzSpec(4, 1), eps1, 40, cfg);
    REQUIRE_FALSE(d.truncated);

    for (int s = 0; s < 3; ++s, ++runs) {
      const EstimateReport rep =
          estimate(prep, d, eps2_est, delta, 7400 + 10 * i + s);
      if (std::abs(2.0 * rep.value - direct) > tolerance) {
        ++misses;
      }
    }
  }
  // Real and imaginary parts fail independently: union bound 2 delta.
  const double p = 2.0 * delta;
  const int allowed =
      static_cast<int>(std::ceil(runs * p)) +
      static_cast<int>(std::ceil(3.0 * std::sqrt(runs * p * (1.0 - p))));
  CHECK(identity_ok);
  CHECK(misses <= allowed);
  report(7, "inner-product identity", identity_ok && misses <= allowed);
}

TEST_CASE("criterion 8: lower-bound sanity on a conjugated Z string") {
  const AnsatzSpec spec(3, 2);
  const ParamVector hidden = random_angles(spec.param_count(), 88);
  const DenseOperator u = build_unitary(spec, hidden);
  const DenseOperator h(
      3, u.entries.adjoint() * to_dense(PauliString("ZZZ")).entries *
             u.entries);

  OptimizerConfig cfg;
  cfg.restarts = 16;
  cfg.max_iters = 200;
  cfg.rng_seed = 5;
  const double epsilon = 0.1;
  const BoundReport rep = lower_bound(h, spec, epsilon, cfg);

  const bool delta_ok = rep.delta_h0 >= 1.0 - 1e-4;
  const double scaled = rep.lower_bound_T * epsilon * epsilon;
  const bool bound_ok = scaled >= 0.99 && scaled <= 1.01;
  CHECK(delta_ok);
  CHECK(bound_ok);
  report(8, "lower-bound sanity", delta_ok && bound_ok);
}

TEST_CASE("criterion 9: qubit-commuting grouping baseline") {
  // The reference two-member cover case reproduced exactly.
  PauliSum example;
  example.terms.push_back({0.3, PauliString("ZXI")});
  example.terms.push_back({0.7, PauliString("ZIY")});
  const auto example_groups = greedy_cover_grouping(example);
  bool cover_ok = example_groups.size() == 1 &&
                  example_groups[0].cover.str() == "ZXY";
  CHECK(cover_ok);

  bool rebuild_ok = true;
  SplitMix64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum sum;
    for (int t = 0; t < 10; ++t) {
      sum.terms.push_back(
          {rng.next_normal(), random_nonidentity_string(4, rng)});
    }
    sum.normalize();
    const DenseOperator h = to_dense(sum);
    MatrixC rebuilt = MatrixC::Zero(h.dim(), h.dim());
    for (const auto& g : greedy_cover_grouping(sum)) {
      const auto [u, lambda] = cover_to_term(g, sum);
      rebuilt +=
          u.entries.adjoint() * lambda.values.asDiagonal() * u.entries;
    }
    const bool ok = (rebuilt - h.entries).norm() < 1e-9;
    CHECK(ok);
    rebuild_ok = rebuild_ok && ok;
  }
  report(9, "grouping baseline", cover_ok && rebuild_ok);
}

TEST_CASE("criterion 10: bench runs are byte-identical") {
  const char* cli = std::getenv("OBSDECOMP_CLI");
  REQUIRE(cli != nullptr);

  const fs::path dir =
      fs::temp_directory_path() /
      ("obsdecomp_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const json config = {{"workload", "sparse"},
                       {"n", 2},
                       {"L", 1},
                       {"K", 4},
                       {"eps1", 0.05},
                       {"eps2", 0.3},
                       {"delta", 0.2},
                       {"seeds", {{"instance", 5}, {"experiment", 6}}},
                       {"optimizer",
                        {{"restarts", 2}, {"max_iters", 80}, {"rng_seed", 7}}},
                       {"shots", json::array({200})},
                       {"repetitions", 3},
                       {"nnz", 6}};
  write_file((dir / "config.json").string(), config.dump());

  const std::string cmd = std::string(cli) + " bench --config " +
                          (dir / "config.json").string() + " --out-dir " +
                          (dir / "out").string() + " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);

  fs::path results;
  for (const auto& entry :
       fs::recursive_directory_iterator(dir / "out")) {
    if (entry.path().filename() == "results.csv") {
      results = entry.path();
    }
  }
  REQUIRE_FALSE(results.empty());
  const std::string first = read_file(results.string());

  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  const std::string second = read_file(results.string());

  const bool identical = first == second && !first.empty();
  CHECK(identical);
  report(10, "bench determinism", identical);

  std::error_code ec;
  fs::remove_all(dir, ec);
}
