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

#include "obsdecomp/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace obsdecomp {

namespace {

// Local gate with its placement; gates are applied in emission order.
struct LocalGate {
  bool two_qubit = false;
  int qubit = 0;  // first qubit, 1-based
  Eigen::Matrix2cd g1;
  Eigen::Matrix4cd g2;
};

std::vector<LocalGate> gate_sequence(const AnsatzSpec& spec,
                                     const ParamVector& theta) {
  if (static_cast<int>(theta.size()) != spec.param_count()) {
    throw std::invalid_argument("parameter vector length does not match spec");
  }
  std::vector<LocalGate> gates;
  gates.reserve(spec.n_qubits + spec.total_two_qubit_gates());
  std::size_t off = 0;
  for (int q = 1; q <= spec.n_qubits; ++q) {
    LocalGate g;
    g.qubit = q;
    g.g1 = single_qubit_gate(theta[off], theta[off + 1], theta[off + 2]);
    off += 3;
    gates.push_back(g);
  }
  for (int layer = 1; layer <= spec.depth; ++layer) {
    for (int k = 0; k < spec.gates_in_layer(layer); ++k) {
      LocalGate g;
      g.two_qubit = true;
      g.qubit = spec.gate_first_qubit(layer, k);
      g.g2 = two_qubit_gate(&theta[off]);
      off += 6;
      gates.push_back(g);
    }
  }
  return gates;
}

// Applies a single-qubit gate over one index axis of an array laid out as
// base[outer * outer_stride + index * inner_stride], where `index` runs over
// the 2^n basis states. Qubit q (1-based) sits at bit (n - q).
void apply1(cx* base, int n, int qubit, const Eigen::Matrix2cd& g,
            std::int64_t outer_count, std::int64_t outer_stride,
            std::int64_t inner_stride) {
  const int bit = n - qubit;
  const std::int64_t stride = std::int64_t{1} << bit;
  const std::int64_t d = std::int64_t{1} << n;
  const cx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (std::int64_t o = 0; o < outer_count; ++o) {
    cx* p = base + o * outer_stride;
    for (std::int64_t block = 0; block < d; block += 2 * stride) {
      for (std::int64_t i = block; i < block + stride; ++i) {
        cx& a0 = p[i * inner_stride];
        cx& a1 = p[(i + stride) * inner_stride];
        const cx t0 = g00 * a0 + g01 * a1;
        const cx t1 = g10 * a0 + g11 * a1;
        a0 = t0;
        a1 = t1;
      }
    }
  }
}

// Two-qubit version for an adjacent pair (qubit, qubit+1); the 4x4 gate is
// indexed as |ab> with a the first qubit.
void apply2(cx* base, int n, int qubit, const Eigen::Matrix4cd& g,
            std::int64_t outer_count, std::int64_t outer_stride,
            std::int64_t inner_stride) {
  const int bit_hi = n - qubit;       // first qubit of the pair
  const int bit_lo = bit_hi - 1;      // second qubit
  const std::int64_t s_hi = std::int64_t{1} << bit_hi;
  const std::int64_t s_lo = std::int64_t{1} << bit_lo;
  const std::int64_t d = std::int64_t{1} << n;
  for (std::int64_t o = 0; o < outer_count; ++o) {
    cx* p = base + o * outer_stride;
    for (std::int64_t hi = 0; hi < d; hi += 2 * s_hi) {
      for (std::int64_t mid = hi; mid < hi + s_hi; mid += 2 * s_lo) {
        for (std::int64_t i = mid; i < mid + s_lo; ++i) {
          cx a[4] = {p[i * inner_stride], p[(i + s_lo) * inner_stride],
                     p[(i + s_hi) * inner_stride],
                     p[(i + s_hi + s_lo) * inner_stride]};
          for (int r = 0; r < 4; ++r) {
            cx acc = 0.0;
            for (int c = 0; c < 4; ++c) {
              acc += g(r, c) * a[c];
            }
            std::int64_t idx = i;
            if (r & 2) idx += s_hi;
            if (r & 1) idx += s_lo;
            p[idx * inner_stride] = acc;
          }
        }
      }
    }
  }
}

// A <- G A G^dag for one local gate G: rows transform by G, then each row
// transforms by conj(G) over the column index.
void conjugate_in_place(MatrixC& m, int n, const LocalGate& g) {
  const std::int64_t d = m.rows();
  if (g.two_qubit) {
    apply2(m.data(), n, g.qubit, g.g2, d, 1, d);
    apply2(m.data(), n, g.qubit, g.g2.conjugate(), d, d, 1);
  } else {
    apply1(m.data(), n, g.qubit, g.g1, d, 1, d);
    apply1(m.data(), n, g.qubit, g.g1.conjugate(), d, d, 1);
  }
}

}  // namespace

AnsatzSpec::AnsatzSpec(int n, int l) : n_qubits(n), depth(l) {
  if (n < 1 || l < 0) {
    throw std::invalid_argument("ansatz needs n >= 1 qubits and L >= 0");
  }
}

int AnsatzSpec::gates_in_layer(int layer) const {
  return (layer % 2 == 1) ? n_qubits / 2 : (n_qubits - 1) / 2;
}

int AnsatzSpec::gate_first_qubit(int layer, int g) const {
  return (layer % 2 == 1) ? 2 * g + 1 : 2 * g + 2;
}

int AnsatzSpec::total_two_qubit_gates() const {
  int total = 0;
  for (int layer = 1; layer <= depth; ++layer) {
    total += gates_in_layer(layer);
  }
  return total;
}

int AnsatzSpec::param_count() const {
  return 3 * n_qubits + 6 * total_two_qubit_gates();
}

Eigen::Matrix2cd single_qubit_gate(double theta, double phi, double lam) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd g;
  g(0, 0) = c;
  g(0, 1) = -std::polar(s, lam);
  g(1, 0) = std::polar(s, phi);
  g(1, 1) = std::polar(c, phi + lam);
  return g;
}

Eigen::Matrix4cd two_qubit_gate(const double* angles) {
  const Eigen::Matrix2cd a = single_qubit_gate(angles[0], angles[1], angles[2]);
  const Eigen::Matrix2cd b = single_qubit_gate(angles[3], angles[4], angles[5]);
  Eigen::Matrix4cd iswap = Eigen::Matrix4cd::Zero();
  iswap(0, 0) = 1.0;
  iswap(1, 2) = cx(0, 1);
  iswap(2, 1) = cx(0, 1);
  iswap(3, 3) = 1.0;
  Eigen::Matrix4cd kron;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      kron.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return kron * iswap;
}

DenseOperator build_unitary(const AnsatzSpec& spec, const ParamVector& theta) {
  const std::int64_t d = dim_of(spec.n_qubits);
  MatrixC u = MatrixC::Identity(d, d);
  // Column c of the result is the circuit applied to |c>, so streaming the
  // gates over the row index of the identity builds U directly.
  for (const LocalGate& g : gate_sequence(spec, theta)) {
    if (g.two_qubit) {
      apply2(u.data(), spec.n_qubits, g.qubit, g.g2, d, 1, d);
    } else {
      apply1(u.data(), spec.n_qubits, g.qubit, g.g1, d, 1, d);
    }
  }
  return DenseOperator(spec.n_qubits, std::move(u));
}

DenseOperator apply_circuit_to_matrix(const AnsatzSpec& spec,
                                      const ParamVector& theta,
                                      const DenseOperator& a) {
  if (a.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("operator dimension does not match ansatz");
  }
  MatrixC m = a.entries;
  for (const LocalGate& g : gate_sequence(spec, theta)) {
    conjugate_in_place(m, spec.n_qubits, g);
  }
  return DenseOperator(spec.n_qubits, std::move(m));
}

StateVector apply_circuit_to_state(const AnsatzSpec& spec,
                                   const ParamVector& theta,
                                   const StateVector& psi) {
  if (psi.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("state dimension does not match ansatz");
  }
  VectorC amps = psi.amplitudes;
  for (const LocalGate& g : gate_sequence(spec, theta)) {
    if (g.two_qubit) {
      apply2(amps.data(), spec.n_qubits, g.qubit, g.g2, 1, 0, 1);
    } else {
      apply1(amps.data(), spec.n_qubits, g.qubit, g.g1, 1, 0, 1);
    }
  }
  return StateVector(spec.n_qubits, std::move(amps));
}

StateVector apply_inverse_circuit_to_state(const AnsatzSpec& spec,
                                           const ParamVector& theta,
                                           const StateVector& psi) {
  if (psi.n_qubits != spec.n_qubits) {
    throw std::invalid_argument("state dimension does not match ansatz");
  }
  VectorC amps = psi.amplitudes;
  const std::vector<LocalGate> gates = gate_sequence(spec, theta);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->two_qubit) {
      apply2(amps.data(), spec.n_qubits, it->qubit,
             it->g2.adjoint().eval(), 1, 0, 1);
    } else {
      apply1(amps.data(), spec.n_qubits, it->qubit,
             it->g1.adjoint().eval(), 1, 0, 1);
    }
  }
  return StateVector(spec.n_qubits, std::move(amps));
}

ConjugationSummary conjugate_summary(const AnsatzSpec& spec,
                                     const ParamVector& theta,
                                     const DenseOperator& a) {
  const DenseOperator m = apply_circuit_to_matrix(spec, theta, a);
  ConjugationSummary out;
  out.diagonal = m.entries.diagonal();
  double acc = 0.0;
  const std::int64_t d = m.dim();
  for (std::int64_t r = 0; r < d; ++r) {
    for (std::int64_t c = 0; c < d; ++c) {
      if (r != c) {
        acc += std::norm(m.entries(r, c));
      }
    }
  }
  out.offdiag_fro = std::sqrt(acc);
  return out;
}

}  // namespace obsdecomp
