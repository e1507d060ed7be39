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

#include "obsdecomp/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace obsdecomp {

namespace {

// Permutation action of one string: Q|b> = phase(b) |b ^ flip_mask>.
struct PauliAction {
  std::uint64_t flip_mask = 0;  // X and Y letters
  std::uint64_t z_mask = 0;     // Z and Y letters (sign depends on bit)
  int y_count = 0;              // global factor i^y_count, sign (-1)^(b&y)
  std::uint64_t y_mask = 0;
};

PauliAction action_of(const PauliString& p) {
  PauliAction act;
  const int n = p.n_qubits();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (p.letters[q]) {
      case PauliLetter::I:
        break;
      case PauliLetter::X:
        act.flip_mask |= bit;
        break;
      case PauliLetter::Y:
        act.flip_mask |= bit;
        act.y_mask |= bit;
        ++act.y_count;
        break;
      case PauliLetter::Z:
        act.z_mask |= bit;
        break;
    }
  }
  return act;
}

// Phase of Q|b>: Y contributes i on |0> and -i on |1>, Z contributes
// (-1)^bit. Collected as i^y_count * (-1)^(popcount of sign-relevant bits).
cx phase_on(const PauliAction& act, std::uint64_t b) {
  const int minus =
      std::popcount(b & (act.z_mask | act.y_mask)) & 1;
  static constexpr cx i_pow[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
  cx phase = i_pow[act.y_count & 3];
  return minus ? -phase : phase;
}

}  // namespace

char to_char(PauliLetter l) {
  switch (l) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c +
                                  "'");
  }
}

PauliString::PauliString(const std::string& s) {
  letters.reserve(s.size());
  for (char c : s) {
    letters.push_back(letter_from_char(c));
  }
}

bool PauliString::is_identity() const {
  return std::all_of(letters.begin(), letters.end(),
                     [](PauliLetter l) { return l == PauliLetter::I; });
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters.size());
  for (PauliLetter l : letters) {
    s.push_back(to_char(l));
  }
  return s;
}

int PauliSum::n_qubits() const {
  return terms.empty() ? 0 : terms.front().string.n_qubits();
}

void PauliSum::normalize(double drop_tol) {
  std::map<std::string, double> merged;
  for (const auto& t : terms) {
    merged[t.string.str()] += t.coefficient;
  }
  std::vector<PauliTerm> out;
  out.reserve(merged.size());
  for (const auto& [s, c] : merged) {
    if (std::abs(c) > drop_tol) {
      out.push_back({c, PauliString(s)});
    }
  }
  terms = std::move(out);
}

DenseOperator to_dense(const PauliString& p) {
  const int n = p.n_qubits();
  const std::int64_t d = dim_of(n);
  const PauliAction act = action_of(p);
  MatrixC m = MatrixC::Zero(d, d);
  for (std::int64_t b = 0; b < d; ++b) {
    m(b ^ act.flip_mask, b) = phase_on(act, b);
  }
  return DenseOperator(n, std::move(m));
}

DenseOperator to_dense(const PauliSum& s) {
  if (s.terms.empty()) {
    throw std::invalid_argument("cannot densify an empty Pauli sum");
  }
  const int n = s.n_qubits();
  const std::int64_t d = dim_of(n);
  MatrixC m = MatrixC::Zero(d, d);
  for (const auto& t : s.terms) {
    if (t.string.n_qubits() != n) {
      throw std::invalid_argument("Pauli sum has mixed string lengths");
    }
    const PauliAction act = action_of(t.string);
    for (std::int64_t b = 0; b < d; ++b) {
      m(b ^ act.flip_mask, b) += t.coefficient * phase_on(act, b);
    }
  }
  return DenseOperator(n, std::move(m));
}

PauliSum pauli_expand(const DenseOperator& h) {
  if (!h.is_hermitian(1e-10)) {
    throw std::invalid_argument("pauli_expand: input is not Hermitian");
  }
  const int n = h.n_qubits;
  const std::int64_t d = h.dim();
  const std::int64_t n_strings = std::int64_t{1} << (2 * n);

  PauliSum sum;
  std::vector<PauliLetter> letters(n);
  for (std::int64_t code = 0; code < n_strings; ++code) {
    std::int64_t c = code;
    for (int q = n - 1; q >= 0; --q) {
      letters[q] = static_cast<PauliLetter>(c & 3);
      c >>= 2;
    }
    PauliString p(letters);
    const PauliAction act = action_of(p);
    // tr(H Q) = sum_b phase(b) H(b, b ^ flip).
    cx tr = 0.0;
    for (std::int64_t b = 0; b < d; ++b) {
      tr += phase_on(act, b) * h.entries(b, b ^ act.flip_mask);
    }
    const double alpha = tr.real() / static_cast<double>(d);
    if (std::abs(alpha) > 1e-13) {
      sum.terms.push_back({alpha, std::move(p)});
    }
  }
  return sum;
}

bool covers(const PauliString& q, const PauliString& p) {
  if (q.n_qubits() != p.n_qubits()) {
    throw std::invalid_argument("covers: string length mismatch");
  }
  for (int i = 0; i < q.n_qubits(); ++i) {
    if (q.letters[i] != PauliLetter::I && q.letters[i] != p.letters[i]) {
      return false;
    }
  }
  return true;
}

std::vector<CoverGroup> greedy_cover_grouping(const PauliSum& s) {
  if (s.terms.empty()) {
    throw std::invalid_argument("cannot group an empty Pauli sum");
  }
  const int n = s.n_qubits();

  std::vector<std::size_t> order(s.terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(s.terms[a].coefficient) > std::abs(s.terms[b].coefficient);
  });

  std::vector<bool> assigned(s.terms.size(), false);
  std::vector<CoverGroup> groups;
  for (std::size_t seed : order) {
    if (assigned[seed]) {
      continue;
    }
    CoverGroup g;
    // Working cover; I means "no member touches this qubit yet".
    std::vector<PauliLetter> cover(n, PauliLetter::I);
    auto compatible = [&](const PauliString& q) {
      for (int i = 0; i < n; ++i) {
        if (q.letters[i] != PauliLetter::I &&
            cover[i] != PauliLetter::I && q.letters[i] != cover[i]) {
          return false;
        }
      }
      return true;
    };
    auto absorb = [&](std::size_t idx) {
      g.members.push_back(idx);
      assigned[idx] = true;
      const auto& q = s.terms[idx].string;
      for (int i = 0; i < n; ++i) {
        if (q.letters[i] != PauliLetter::I) {
          cover[i] = q.letters[i];
        }
      }
    };
    absorb(seed);
    for (std::size_t cand : order) {
      if (!assigned[cand] && compatible(s.terms[cand].string)) {
        absorb(cand);
      }
    }
    // Untouched qubits default to Z, making U the identity there.
    for (auto& l : cover) {
      if (l == PauliLetter::I) {
        l = PauliLetter::Z;
      }
    }
    g.cover = PauliString(cover);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::pair<DenseOperator, DiagObservable> cover_to_term(const CoverGroup& g,
                                                       const PauliSum& s) {
  const int n = s.n_qubits();
  if (g.cover.n_qubits() != n) {
    throw std::invalid_argument("cover length does not match the Pauli sum");
  }
  for (std::size_t idx : g.members) {
    if (idx >= s.terms.size() || !covers(s.terms[idx].string, g.cover)) {
      throw std::invalid_argument("group member is not covered by the cover");
    }
  }

  // Single-qubit rotations: X and Y letters rotate into the Z eigenbasis.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::int64_t d = dim_of(n);
  MatrixC u = MatrixC::Zero(1, 1);
  u(0, 0) = 1.0;
  for (int q = 0; q < n; ++q) {
    Eigen::Matrix2cd local;
    switch (g.cover.letters[q]) {
      case PauliLetter::X:
        local << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
        break;
      case PauliLetter::Y:
        local << inv_sqrt2, cx(0, -inv_sqrt2), inv_sqrt2, cx(0, inv_sqrt2);
        break;
      default:
        local.setIdentity();
        break;
    }
    MatrixC next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      for (Eigen::Index c = 0; c < u.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = u(r, c) * local;
      }
    }
    u = std::move(next);
  }

  // Lambda(b) = sum over members of alpha_j * (-1)^(bits of b where the
  // member is non-identity); the rotated member is a Z string there.
  VectorC lambda = VectorC::Zero(d);
  for (std::size_t idx : g.members) {
    const auto& term = s.terms[idx];
    std::uint64_t mask = 0;
    for (int q = 0; q < n; ++q) {
      if (term.string.letters[q] != PauliLetter::I) {
        mask |= std::uint64_t{1} << (n - 1 - q);
      }
    }
    for (std::int64_t b = 0; b < d; ++b) {
      const double sign = (std::popcount(static_cast<std::uint64_t>(b) & mask) & 1)
                              ? -1.0
                              : 1.0;
      lambda(b) += term.coefficient * sign;
    }
  }
  return {DenseOperator(n, std::move(u)), DiagObservable(n, std::move(lambda))};
}

}  // namespace obsdecomp
