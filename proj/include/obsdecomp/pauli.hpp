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

#include "obsdecomp/linalg.hpp"

namespace obsdecomp {

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

char to_char(PauliLetter l);
PauliLetter letter_from_char(char c);

/// Tensor product of single-qubit Paulis; qubit 1 is the leftmost letter
/// and the most significant bit of basis indices.
struct PauliString {
  std::vector<PauliLetter> letters;

  PauliString() = default;
  explicit PauliString(std::vector<PauliLetter> ls) : letters(std::move(ls)) {}
  explicit PauliString(const std::string& s);

  int n_qubits() const { return static_cast<int>(letters.size()); }
  bool is_identity() const;
  std::string str() const;

  bool operator==(const PauliString& other) const = default;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Real linear combination of Pauli strings. Normalization merges duplicate
/// strings and drops zero coefficients.
struct PauliSum {
  std::vector<PauliTerm> terms;

  int n_qubits() const;
  /// Merge duplicates, drop coefficients below drop_tol in magnitude.
  void normalize(double drop_tol = 0.0);
};

/// One qubit-commuting group: member indices into a PauliSum plus the
/// covering Pauli (no identity letters; Z on qubits untouched by members).
struct CoverGroup {
  std::vector<std::size_t> members;
  PauliString cover;
};

DenseOperator to_dense(const PauliString& p);
DenseOperator to_dense(const PauliSum& s);

/// Pauli-basis expansion of a Hermitian operator: alpha_Q = tr(H Q) / 2^n.
/// Coefficients with |alpha| <= 1e-13 are dropped.
PauliSum pauli_expand(const DenseOperator& h);

/// Q is covered by P: every letter of Q is I or equals P's letter there.
bool covers(const PauliString& q, const PauliString& p);

/// Disjoint qubit-commuting grouping: seed each group with the largest
/// uncovered |coefficient|, absorb every compatible remaining term.
std::vector<CoverGroup> greedy_cover_grouping(const PauliSum& s);

/// Measurement term of one group: U is the tensor product of single-qubit
/// rotations diagonalizing the cover (I/Z -> identity, X -> Hadamard,
/// Y -> its eigenbasis rotation) and Lambda the summed rotated diagonals.
std::pair<DenseOperator, DiagObservable> cover_to_term(const CoverGroup& g,
                                                       const PauliSum& s);

}  // namespace obsdecomp
