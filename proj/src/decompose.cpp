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

#include "obsdecomp/decompose.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "obsdecomp/rng.hpp"

namespace obsdecomp {

namespace {

double squared_offdiag_cost(const AnsatzSpec& spec, const ParamVector& theta,
                            const DenseOperator& a) {
  const ConjugationSummary s = conjugate_summary(spec, theta, a);
  return s.offdiag_fro * s.offdiag_fro;
}

// Per-step RNG seed: a function of the decomposition seed and the absolute
// term index, so resumed runs replay the same stream as uninterrupted ones.
std::uint64_t step_seed(std::uint64_t rng_seed, std::size_t k) {
  return derive_seed(rng_seed, static_cast<std::uint64_t>(k));
}

void append_residual_norms(Decomposition& d, const DenseOperator& residual) {
  d.residual_fro.push_back(frobenius_norm(residual));
  d.residual_spec.push_back(spectral_norm(residual));
}

// H^(k+1) = H^(k) - U^dag Lambda U, evaluated in the rotated frame so the
// subtraction removes the diagonal exactly. Resume replays this same
// arithmetic, keeping resumed runs bitwise identical to uninterrupted ones.
DenseOperator subtract_term(const AnsatzSpec& spec, const DenseOperator& residual,
                            const ParamVector& theta, const VectorC& lambda) {
  const DenseOperator rotated = apply_circuit_to_matrix(spec, theta, residual);
  MatrixC stripped = rotated.entries;
  stripped.diagonal() -= lambda;
  const DenseOperator u = build_unitary(spec, theta);
  return DenseOperator(spec.n_qubits,
                       u.entries.adjoint() * stripped * u.entries);
}

// Runs the greedy loop in place: `residual` holds H^(k) on entry and the
// final residual on exit.
void run_greedy(Decomposition& d, DenseOperator& residual, double eps1,
                int max_terms, const OptimizerConfig& cfg, int threads,
                std::uint64_t rng_seed, const TermCallback& on_term) {
  while (static_cast<int>(d.terms.size()) < max_terms) {
    if (d.residual_spec.back() <= eps1) {
      return;
    }
    OptimizerConfig step_cfg = cfg;
    step_cfg.rng_seed = step_seed(rng_seed, d.terms.size());
    auto [theta, cost] = optimize_theta(d.spec, residual, step_cfg, threads);
    (void)cost;

    const DenseOperator rotated =
        apply_circuit_to_matrix(d.spec, theta, residual);
    VectorC lambda = rotated.entries.diagonal();
    if (d.hermitian) {
      lambda = lambda.real().cast<cx>();  // keep the real-valued Lambda path exact
    }
    residual = subtract_term(d.spec, residual, theta, lambda);

    d.terms.push_back(
        {std::move(theta), DiagObservable(d.spec.n_qubits, std::move(lambda))});
    append_residual_norms(d, residual);
    if (on_term) {
      on_term(d);
    }
  }
  d.truncated = d.residual_spec.back() > eps1;
}

}  // namespace

std::string operator_digest(const DenseOperator& a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t n = a.n_qubits;
  feed(&n, sizeof(n));
  feed(a.entries.data(), sizeof(cx) * a.entries.size());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double offdiag_cost(const AnsatzSpec& spec, const ParamVector& theta,
                    const DenseOperator& a) {
  return conjugate_summary(spec, theta, a).offdiag_fro;
}

std::vector<double> fd_gradient(const AnsatzSpec& spec,
                                const ParamVector& theta,
                                const DenseOperator& a, double fd_step) {
  if (fd_step <= 0) {
    throw std::invalid_argument("fd_step must be positive");
  }
  const std::size_t d = theta.size();
  std::vector<double> grad(d);
  ParamVector probe = theta;
  for (std::size_t i = 0; i < d; ++i) {
    probe[i] = theta[i] + fd_step;
    const double plus = squared_offdiag_cost(spec, probe, a);
    probe[i] = theta[i] - fd_step;
    const double minus = squared_offdiag_cost(spec, probe, a);
    probe[i] = theta[i];
    grad[i] = (plus - minus) / (2.0 * fd_step);
  }
  return grad;
}

std::pair<ParamVector, double> optimize_theta(const AnsatzSpec& spec,
                                              const DenseOperator& a,
                                              const OptimizerConfig& cfg,
                                              int threads) {
  cfg.validate();
  if (frobenius_norm(a) == 0.0) {
    throw std::invalid_argument("optimize_theta: operator is zero");
  }
  const ObjectiveFn f = [&](const ParamVector& t) {
    return squared_offdiag_cost(spec, t, a);
  };
  const GradientFn g = [&](const ParamVector& t) {
    return fd_gradient(spec, t, a, cfg.fd_step);
  };
  std::vector<ParamVector> starts;
  starts.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r) {
    starts.push_back(
        random_angles(spec.param_count(), derive_seed(cfg.rng_seed, r)));
  }
  DescentResult best = multistart_minimize(f, g, starts, cfg, threads);
  return {std::move(best.theta), std::sqrt(std::max(best.value, 0.0))};
}

Decomposition greedy_decompose(const DenseOperator& h, const AnsatzSpec& spec,
                               double eps1, int max_terms,
                               const OptimizerConfig& cfg, int threads,
                               const TermCallback& on_term) {
  if (eps1 <= 0) {
    throw std::invalid_argument("eps1 must be positive");
  }
  if (max_terms < 1) {
    throw std::invalid_argument("max_terms must be at least 1");
  }
  if (h.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("operator dimension does not match ansatz");
  }

  Decomposition d;
  d.spec = spec;
  d.target_hash = operator_digest(h);
  d.hermitian = h.is_hermitian(1e-10);

  if (frobenius_norm(h) == 0.0) {
    d.residual_fro.push_back(0.0);
    d.residual_spec.push_back(0.0);
    return d;
  }

  DenseOperator residual = h;
  append_residual_norms(d, residual);
  run_greedy(d, residual, eps1, max_terms, cfg, threads, cfg.rng_seed, on_term);
  return d;
}

Decomposition continue_decompose(const DenseOperator& h, Decomposition prior,
                                 double eps1, int max_terms,
                                 const OptimizerConfig& cfg, int threads,
                                 const TermCallback& on_term) {
  if (operator_digest(h) != prior.target_hash) {
    throw std::runtime_error(
        "checkpoint does not match the target operator (digest mismatch)");
  }
  if (prior.residual_spec.size() != prior.terms.size() + 1) {
    throw std::runtime_error("checkpoint residual history is inconsistent");
  }
  DenseOperator residual = h;
  for (const DecompTerm& term : prior.terms) {
    residual = subtract_term(prior.spec, residual, term.theta,
                             term.lambda.values);
  }
  prior.truncated = false;
  run_greedy(prior, residual, eps1, max_terms, cfg, threads, cfg.rng_seed,
             on_term);
  return prior;
}

DenseOperator reconstruct(const Decomposition& d) {
  const std::int64_t dim = dim_of(d.spec.n_qubits);
  MatrixC sum = MatrixC::Zero(dim, dim);
  for (const DecompTerm& term : d.terms) {
    const DenseOperator u = build_unitary(d.spec, term.theta);
    sum += u.entries.adjoint() * term.lambda.values.asDiagonal() * u.entries;
  }
  return DenseOperator(d.spec.n_qubits, std::move(sum));
}

}  // namespace obsdecomp
