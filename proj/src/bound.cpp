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

#include "obsdecomp/bound.hpp"

#include <cmath>
#include <stdexcept>

#include "obsdecomp/optimizer.hpp"
#include "obsdecomp/rng.hpp"

namespace obsdecomp {

namespace {

// All 2^n diagonal entries of U(theta) H0 U(theta)^dag; real for Hermitian
// H0 up to roundoff.
VectorR conjugated_diagonal(const AnsatzSpec& spec, const ParamVector& theta,
                            const DenseOperator& h0) {
  return conjugate_summary(spec, theta, h0).diagonal.real();
}

struct DiagPick {
  std::int64_t b = 0;
  double value = 0.0;  // the diagonal entry itself, not its square
};

// Largest squared entry; ties resolved toward the lowest bitstring.
DiagPick pick_max(const VectorR& diag) {
  DiagPick pick{0, diag(0)};
  for (std::int64_t b = 1; b < diag.size(); ++b) {
    if (diag(b) * diag(b) > pick.value * pick.value) {
      pick = {b, diag(b)};
    }
  }
  return pick;
}

// <b| U H0 U^dag |b> for a single bitstring, via the state U^dag|b>.
double diagonal_entry(const AnsatzSpec& spec, const ParamVector& theta,
                      const DenseOperator& h0, std::int64_t b) {
  const StateVector phi = apply_inverse_circuit_to_state(
      spec, theta, StateVector::computational_basis(spec.n_qubits, b));
  return expectation(phi, h0).real();
}

}  // namespace

DenseOperator traceless_part(const DenseOperator& h) {
  const cx mean = h.entries.trace() / static_cast<double>(h.dim());
  MatrixC m = h.entries;
  m.diagonal().array() -= mean;
  return DenseOperator(h.n_qubits, std::move(m));
}

DeltaResult delta_h0(const DenseOperator& h0, const AnsatzSpec& spec,
                     const OptimizerConfig& cfg, int threads) {
  cfg.validate();
  if (h0.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("operator dimension does not match ansatz");
  }
  if (std::abs(h0.entries.trace()) > 1e-8 * std::max(1.0, frobenius_norm(h0))) {
    throw std::invalid_argument("delta_h0 expects a traceless operator");
  }

  // Minimize -max_b d_b^2. The gradient follows the currently maximal
  // diagonal entry: grad(-d^2) = -2 d grad(d) with b frozen per stencil.
  const ObjectiveFn f = [&](const ParamVector& t) {
    const VectorR diag = conjugated_diagonal(spec, t, h0);
    const DiagPick pick = pick_max(diag);
    return -pick.value * pick.value;
  };
  const GradientFn g = [&](const ParamVector& t) {
    const VectorR diag = conjugated_diagonal(spec, t, h0);
    const DiagPick pick = pick_max(diag);
    std::vector<double> grad(t.size());
    ParamVector probe = t;
    for (std::size_t i = 0; i < t.size(); ++i) {
      probe[i] = t[i] + cfg.fd_step;
      const double plus = diagonal_entry(spec, probe, h0, pick.b);
      probe[i] = t[i] - cfg.fd_step;
      const double minus = diagonal_entry(spec, probe, h0, pick.b);
      probe[i] = t[i];
      grad[i] = -2.0 * pick.value * (plus - minus) / (2.0 * cfg.fd_step);
    }
    return grad;
  };

  std::vector<ParamVector> starts;
  starts.reserve(cfg.restarts);
  starts.emplace_back(spec.param_count(), 0.0);  // identity angles
  for (int r = 1; r < cfg.restarts; ++r) {
    starts.push_back(
        random_angles(spec.param_count(), derive_seed(cfg.rng_seed, r)));
  }
  const DescentResult best = multistart_minimize(f, g, starts, cfg, threads);

  DeltaResult result;
  result.theta = best.theta;
  const VectorR diag = conjugated_diagonal(spec, result.theta, h0);
  const DiagPick pick = pick_max(diag);
  result.delta = pick.value * pick.value;
  result.bitstring = pick.b;
  return result;
}

BoundReport lower_bound(const DenseOperator& h, const AnsatzSpec& spec,
                        double epsilon, const OptimizerConfig& cfg,
                        int threads) {
  if (epsilon <= 0) {
    throw std::invalid_argument("epsilon must be positive");
  }
  const DenseOperator h0 = traceless_part(h);

  BoundReport report;
  report.epsilon = epsilon;
  report.restarts_used = cfg.restarts;
  report.trace_h0_sq = (h0.entries * h0.entries).trace().real();

  const double four_n = std::pow(4.0, h.n_qubits);
  if (report.trace_h0_sq <= 1e-14) {
    report.note = "traceless part vanishes; nothing to estimate";
    return report;
  }

  const DeltaResult delta = delta_h0(h0, spec, cfg, threads);
  report.delta_h0 = delta.delta;
  report.argmax_theta = delta.theta;
  report.argmax_bitstring = delta.bitstring;

  // delta is an achieved value, hence a lower estimate of the supremum and
  // the resulting T an upper estimate of the true floor.
  const double scale = report.trace_h0_sq / static_cast<double>(h.dim());
  if (report.delta_h0 < 1e-12 * scale * scale) {
    report.unbounded = true;
    report.note =
        "no tested circuit direction resolves the traceless part; "
        "the floor is unbounded along this family";
    return report;
  }
  report.lower_bound_T = report.trace_h0_sq * report.trace_h0_sq /
                         (epsilon * epsilon * report.delta_h0 * four_n);
  report.note =
      "order-of-magnitude floor; delta_h0 is an achieved maximum, so the "
      "reported T upper-estimates the true bound";
  return report;
}

}  // namespace obsdecomp
