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

#include <Eigen/QR>
#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "obsdecomp/rng.hpp"

namespace obsdecomp {

namespace {

// Remaining nnz weight is coverable iff some d_used <= d_avail with the
// parity of `remaining` satisfies d_used + 2 * pairs_used = remaining.
bool coverable(std::int64_t remaining, std::int64_t d_avail,
               std::int64_t p_avail) {
  if (remaining < 0) {
    return false;
  }
  const std::int64_t lo = std::max<std::int64_t>(0, remaining - 2 * p_avail);
  const std::int64_t hi = std::min(d_avail, remaining);
  if (lo > hi) {
    return false;
  }
  // Need an integer in [lo, hi] with the parity of `remaining`.
  const std::int64_t first =
      lo + (((remaining - lo) % 2) + 2) % 2;
  return first <= hi;
}

double percentile(std::vector<double> sorted_values, double p) {
  if (sorted_values.empty()) {
    return 0.0;
  }
  const double idx = p * (sorted_values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = idx - lo;
  return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

}  // namespace

DenseOperator gen_sparse_hamiltonian(const SparseHamiltonianSpec& spec) {
  const int n = spec.n_qubits;
  const std::int64_t d = dim_of(n);
  const std::int64_t max_entries = d * d;
  if (spec.nnz < 1 || spec.nnz > max_entries) {
    throw std::invalid_argument("nnz out of range for the matrix size");
  }
  if (spec.magnitude_scale <= 0) {
    throw std::invalid_argument("magnitude_scale must be positive");
  }

  const std::int64_t total_pairs = d * (d - 1) / 2;
  if (!coverable(spec.nnz, d, total_pairs)) {
    throw std::invalid_argument("nnz is infeasible for a Hermitian pattern");
  }

  SplitMix64 rng(spec.rng_seed);
  MatrixC m = MatrixC::Zero(d, d);
  std::set<std::int64_t> used_diag;
  std::set<std::pair<std::int64_t, std::int64_t>> used_pairs;
  std::int64_t remaining = spec.nnz;
  while (remaining > 0) {
    const std::int64_t d_avail = d - static_cast<std::int64_t>(used_diag.size());
    const std::int64_t p_avail =
        total_pairs - static_cast<std::int64_t>(used_pairs.size());
    // Choose entry kind in proportion to the unused slots of each kind,
    // unless feasibility forces one.
    const bool can_diag =
        d_avail > 0 && coverable(remaining - 1, d_avail - 1, p_avail);
    const bool can_pair =
        remaining >= 2 && p_avail > 0 &&
        coverable(remaining - 2, d_avail, p_avail - 1);
    bool take_diag;
    if (can_diag && can_pair) {
      const double p_d = static_cast<double>(d_avail) /
                         static_cast<double>(d_avail + 2 * p_avail);
      take_diag = rng.next_double() < p_d;
    } else if (can_diag) {
      take_diag = true;
    } else if (can_pair) {
      take_diag = false;
    } else {
      throw std::logic_error("sparse sampler reached an infeasible state");
    }

    if (take_diag) {
      std::int64_t i;
      do {
        i = static_cast<std::int64_t>(rng.next_u64() % d);
      } while (used_diag.count(i) != 0);
      used_diag.insert(i);
      m(i, i) = rng.next_normal();
      remaining -= 1;
    } else {
      std::int64_t i, j;
      do {
        i = static_cast<std::int64_t>(rng.next_u64() % d);
        j = static_cast<std::int64_t>(rng.next_u64() % d);
        if (i > j) {
          std::swap(i, j);
        }
      } while (i == j || used_pairs.count({i, j}) != 0);
      used_pairs.insert({i, j});
      const cx z(rng.next_normal(), rng.next_normal());
      m(i, j) = z;
      m(j, i) = std::conj(z);
      remaining -= 2;
    }
  }

  const double fro = m.norm();
  m *= spec.magnitude_scale / fro;
  return DenseOperator(n, std::move(m));
}

std::pair<double, StateVector> ground_state(const DenseOperator& h) {
  const auto [evals, evecs] = hermitian_eig(h);
  VectorC ground = evecs.entries.col(0);
  ground.normalize();
  return {evals(0), StateVector(h.n_qubits, std::move(ground))};
}

MatrixC random_unitary(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MatrixC gauss(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      gauss(r, c) = cx(rng.next_normal(), rng.next_normal());
    }
  }
  Eigen::HouseholderQR<MatrixC> qr(gauss);
  MatrixC q = qr.householderQ() * MatrixC::Identity(n, n);
  const MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase convention so the distribution is Haar.
  for (int c = 0; c < n; ++c) {
    const cx diag = r(c, c);
    if (std::abs(diag) > 0) {
      q.col(c) *= diag / std::abs(diag);
    }
  }
  return q;
}

SlaterSpec make_slater_spec(int n_modes, int tau, std::uint64_t seed) {
  SlaterSpec spec;
  spec.n_modes = n_modes;
  spec.tau = tau;
  spec.rng_seed = seed;
  spec.unitary = random_unitary(n_modes, seed);
  return spec;
}

StateVector slater_state(const SlaterSpec& spec) {
  const int n = spec.n_modes;
  if (spec.tau < 1 || spec.tau > n) {
    throw std::invalid_argument("tau must lie in [1, n_modes]");
  }
  if (spec.unitary.rows() != n || spec.unitary.cols() != n) {
    throw std::invalid_argument("slater unitary has the wrong shape");
  }
  if ((spec.unitary * spec.unitary.adjoint() - MatrixC::Identity(n, n))
          .norm() > 1e-10) {
    throw std::invalid_argument("slater rows are not orthonormal");
  }

  const std::int64_t d = dim_of(n);
  VectorC state = VectorC::Zero(d);
  state(0) = 1.0;  // vacuum
  for (int k = spec.tau; k >= 1; --k) {
    VectorC next = VectorC::Zero(d);
    for (int j = 1; j <= n; ++j) {
      const cx coeff = std::conj(spec.unitary(k - 1, j - 1));
      if (coeff == cx(0.0, 0.0)) {
        continue;
      }
      const std::uint64_t mode_bit = std::uint64_t{1} << (n - j);
      // Jordan-Wigner string: parity of occupied modes left of mode j.
      const std::uint64_t z_mask =
          (j > 1) ? (((std::uint64_t{1} << (j - 1)) - 1) << (n - j + 1)) : 0;
      for (std::int64_t b = 0; b < d; ++b) {
        if (state(b) == cx(0.0, 0.0) ||
            (static_cast<std::uint64_t>(b) & mode_bit) != 0) {
          continue;
        }
        const double sign =
            (std::popcount(static_cast<std::uint64_t>(b) & z_mask) & 1) ? -1.0
                                                                        : 1.0;
        next(b | mode_bit) += coeff * sign * state(b);
      }
    }
    state = std::move(next);
  }
  const double norm = state.norm();
  if (norm < 1e-12) {
    throw std::runtime_error("slater state collapsed to zero");
  }
  state /= norm;
  return StateVector(n, std::move(state));
}

StateVector ancilla_superposition(const StateVector& psi) {
  const std::int64_t d = psi.dim();
  VectorC out = VectorC::Zero(2 * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  out(0) = inv_sqrt2;
  for (std::int64_t b = 0; b < d; ++b) {
    out(d + b) = inv_sqrt2 * psi.amplitudes(b);
  }
  return StateVector(psi.n_qubits + 1, std::move(out));
}

DenseOperator inner_product_operator(const StateVector& phi) {
  const std::int64_t d = phi.dim();
  MatrixC m = MatrixC::Zero(2 * d, 2 * d);
  for (std::int64_t b = 0; b < d; ++b) {
    m(d + b, 0) = phi.amplitudes(b);
  }
  return DenseOperator(phi.n_qubits + 1, std::move(m));
}

std::pair<DenseOperator, DenseOperator> hermitian_split(
    const DenseOperator& o) {
  MatrixC h1 = (o.entries + o.entries.adjoint()) / 2.0;
  MatrixC h2 = (o.entries - o.entries.adjoint()) * cx(0.0, -0.5);
  return {DenseOperator(o.n_qubits, std::move(h1)),
          DenseOperator(o.n_qubits, std::move(h2))};
}

StateVector random_state(int n_qubits, std::uint64_t seed) {
  SplitMix64 rng(seed);
  VectorC amps(dim_of(n_qubits));
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    amps(i) = cx(rng.next_normal(), rng.next_normal());
  }
  amps.normalize();
  return StateVector(n_qubits, std::move(amps));
}

WorkloadInstance build_workload_instance(const BenchConfig& cfg) {
  if (cfg.workload != "sparse" && cfg.workload != "inner_product") {
    throw std::invalid_argument("unknown workload: " + cfg.workload);
  }
  WorkloadInstance instance;
  if (cfg.workload == "sparse") {
    instance.target = gen_sparse_hamiltonian(
        {cfg.n, cfg.nnz, cfg.magnitude_scale, cfg.instance_seed});
    auto [energy, psi] = ground_state(instance.target);
    (void)energy;
    instance.input_state = std::move(psi);
  } else {
    const SlaterSpec slater =
        make_slater_spec(cfg.n, cfg.tau, cfg.instance_seed);
    const StateVector phi = slater_state(slater);
    const StateVector psi =
        random_state(cfg.n, derive_seed(cfg.instance_seed, 1));
    instance.input_state = ancilla_superposition(psi);
    instance.target = inner_product_operator(phi);
  }
  return instance;
}

BenchOutput run_benchmark(const BenchConfig& cfg) {
  WorkloadInstance instance = build_workload_instance(cfg);
  const DenseOperator& target = instance.target;
  const StateVector& input_state = instance.input_state;

  const AnsatzSpec spec(input_state.n_qubits, cfg.depth);
  BenchOutput out;
  out.decomposition = greedy_decompose(target, spec, cfg.eps1, cfg.max_terms,
                                       cfg.optimizer, cfg.threads);
  out.exact = expectation(input_state, target);
  out.exact_recon = expectation(input_state, reconstruct(out.decomposition));

  if (cfg.dry_run || cfg.shots.empty()) {
    return out;
  }

  const double tolerance = cfg.eps1 + cfg.eps2;
  for (std::size_t bi = 0; bi < cfg.shots.size(); ++bi) {
    std::vector<double> errors;
    errors.reserve(cfg.repetitions);
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      const std::uint64_t seed =
          derive_seed(cfg.experiment_seed, bi, static_cast<std::uint64_t>(rep));
      const EstimateReport report = estimate_with_budget(
          input_state, out.decomposition, cfg.shots[bi], cfg.delta, seed);
      BenchRow row;
      row.shots_budget = cfg.shots[bi];
      row.repetition = rep;
      row.seed = seed;
      row.shots_used = report.shots_used;
      row.batches = report.batches;
      row.batch_size = report.batch_size;
      row.value = report.value;
      row.abs_error = std::abs(report.value - out.exact);
      errors.push_back(row.abs_error);
      out.rows.push_back(row);
    }

    BudgetSummary summary;
    summary.shots = cfg.shots[bi];
    double sum = 0.0;
    int hits = 0;
    for (double e : errors) {
      sum += e;
      if (e <= tolerance) {
        ++hits;
      }
    }
    summary.mean_abs_error = sum / errors.size();
    summary.hit_rate = static_cast<double>(hits) / errors.size();

    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    summary.p50 = percentile(sorted, 0.5);
    summary.p90 = percentile(sorted, 0.9);

    // Bootstrap 95% interval for the mean absolute error.
    const int boots = 1000;
    std::vector<double> means(boots);
    SplitMix64 boot_rng(derive_seed(cfg.experiment_seed, 0xB007, bi));
    for (int bb = 0; bb < boots; ++bb) {
      double acc = 0.0;
      for (std::size_t i = 0; i < errors.size(); ++i) {
        acc += errors[boot_rng.next_u64() % errors.size()];
      }
      means[bb] = acc / errors.size();
    }
    std::sort(means.begin(), means.end());
    summary.ci95_lo = percentile(means, 0.025);
    summary.ci95_hi = percentile(means, 0.975);
    out.budgets.push_back(summary);
  }
  return out;
}

}  // namespace obsdecomp
