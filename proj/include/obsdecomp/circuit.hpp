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
#include <vector>

#include "obsdecomp/linalg.hpp"

namespace obsdecomp {

/// Flat parameter array in radians. Layout: layer-0 single-qubit triples
/// (theta, phi, lambda) qubit by qubit, then per brick layer, per gate,
/// six angles (first-qubit triple, second-qubit triple).
using ParamVector = std::vector<double>;

/// The L-depth brick ansatz U_L(theta): a layer of arbitrary single-qubit
/// gates, then L brick layers of iSWAP-based 2-qubit gates. Odd layers pair
/// (1,2),(3,4),...; even layers pair (2,3),(4,5),.... Open boundary.
struct AnsatzSpec {
  int n_qubits = 1;
  int depth = 0;

  AnsatzSpec() = default;
  AnsatzSpec(int n, int l);

  /// Gates in brick layer `layer` (1-based): floor(n/2) when odd,
  /// floor((n-1)/2) when even.
  int gates_in_layer(int layer) const;
  /// First qubit (1-based) of gate `g` (0-based) in brick layer `layer`.
  int gate_first_qubit(int layer, int g) const;
  int total_two_qubit_gates() const;
  /// 3n for layer 0 plus 6 per 2-qubit gate.
  int param_count() const;

  bool operator==(const AnsatzSpec& other) const = default;
};

/// [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
Eigen::Matrix2cd single_qubit_gate(double theta, double phi, double lam);

/// (A x B) * iSWAP with A, B single-qubit gates from the six angles
/// (first-qubit triple then second-qubit triple).
Eigen::Matrix4cd two_qubit_gate(const double* angles);

/// Full 2^n x 2^n unitary of the ansatz, layer 0 applied first.
DenseOperator build_unitary(const AnsatzSpec& spec, const ParamVector& theta);

/// U_L(theta) A U_L(theta)^dag without materializing U: every local gate is
/// streamed over the matrix rows and columns in turn.
DenseOperator apply_circuit_to_matrix(const AnsatzSpec& spec,
                                      const ParamVector& theta,
                                      const DenseOperator& a);

/// U_L(theta) |psi>.
StateVector apply_circuit_to_state(const AnsatzSpec& spec,
                                   const ParamVector& theta,
                                   const StateVector& psi);

/// U_L(theta)^dag |psi>: the gate sequence reversed with adjoint gates.
StateVector apply_inverse_circuit_to_state(const AnsatzSpec& spec,
                                           const ParamVector& theta,
                                           const StateVector& psi);

/// Same conjugation as apply_circuit_to_matrix, but returns only the pieces
/// the decomposition loop needs: the diagonal and the off-diagonal Frobenius
/// norm of the conjugated matrix.
struct ConjugationSummary {
  VectorC diagonal;
  double offdiag_fro = 0.0;
};
ConjugationSummary conjugate_summary(const AnsatzSpec& spec,
                                     const ParamVector& theta,
                                     const DenseOperator& a);

}  // namespace obsdecomp
