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

#include <functional>
#include <string>
#include <vector>

#include "obsdecomp/circuit.hpp"
#include "obsdecomp/linalg.hpp"
#include "obsdecomp/optimizer.hpp"

namespace obsdecomp {

/// One decomposition term: the circuit angles and the diagonal extracted
/// from the conjugated residual at the moment of extraction.
struct DecompTerm {
  ParamVector theta;
  DiagObservable lambda;
};

/// Output of the greedy projected decomposition. residual_fro[k] and
/// residual_spec[k] are the norms of the residual after k terms, so entry 0
/// is the input operator's norm and both arrays have terms.size()+1 entries.
struct Decomposition {
  AnsatzSpec spec;
  std::vector<DecompTerm> terms;
  std::vector<double> residual_fro;
  std::vector<double> residual_spec;
  std::string target_hash;
  bool hermitian = true;
  bool truncated = false;
};

/// Content digest of an operator (FNV-1a over n and the raw entry bytes).
std::string operator_digest(const DenseOperator& a);

/// Frobenius distance between the conjugated operator and its diagonal:
/// |M - diag(M)|_F with M = U_L(theta) A U_L(theta)^dag.
double offdiag_cost(const AnsatzSpec& spec, const ParamVector& theta,
                    const DenseOperator& a);

/// Central-difference gradient of the squared off-diagonal cost.
std::vector<double> fd_gradient(const AnsatzSpec& spec,
                                const ParamVector& theta,
                                const DenseOperator& a, double fd_step);

/// Multistart descent on the squared cost from uniform random angles in
/// [0, 2pi)^d; restart streams derive from (rng_seed, restart_index).
/// Returns the best angles and the (unsquared) cost there.
std::pair<ParamVector, double> optimize_theta(const AnsatzSpec& spec,
                                              const DenseOperator& a,
                                              const OptimizerConfig& cfg,
                                              int threads = 1);

/// Called after every appended term; used by the CLI to checkpoint.
using TermCallback = std::function<void(const Decomposition&)>;

/// Greedy projected decomposition: optimize angles for the residual,
/// extract the rotated diagonal, subtract, repeat until the spectral
/// residual reaches eps1 or max_terms is hit (then `truncated` is set).
Decomposition greedy_decompose(const DenseOperator& h, const AnsatzSpec& spec,
                               double eps1, int max_terms,
                               const OptimizerConfig& cfg, int threads = 1,
                               const TermCallback& on_term = {});

/// Resume a decomposition from a checkpoint: replays the stored chain to
/// rebuild the residual bitwise, then continues up to max_terms total
/// terms. Step k reuses the same derived seed as an uninterrupted run.
Decomposition continue_decompose(const DenseOperator& h, Decomposition prior,
                                 double eps1, int max_terms,
                                 const OptimizerConfig& cfg, int threads = 1,
                                 const TermCallback& on_term = {});

/// Sum of U^dag Lambda_k U over all terms.
DenseOperator reconstruct(const Decomposition& d);

}  // namespace obsdecomp
