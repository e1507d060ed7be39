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

#include "obsdecomp/decompose.hpp"
#include "obsdecomp/linalg.hpp"

namespace obsdecomp {

/// Sample-complexity floor for estimating H with the given ansatz:
/// lower_bound_T = tr(H0^2)^2 / (epsilon^2 * delta_h0 * 4^n). Since delta_h0
/// is an achieved (not extrapolated) maximum, the reported T is an upper
/// estimate of the true floor; `note` carries that caveat.
struct BoundReport {
  double delta_h0 = 0.0;
  double trace_h0_sq = 0.0;
  double epsilon = 0.0;
  double lower_bound_T = 0.0;
  ParamVector argmax_theta;
  std::int64_t argmax_bitstring = 0;
  int restarts_used = 0;
  bool unbounded = false;
  std::string note;
};

/// H - tr(H)/2^n * I.
DenseOperator traceless_part(const DenseOperator& h);

struct DeltaResult {
  double delta = 0.0;
  ParamVector theta;
  std::int64_t bitstring = 0;
};

/// Multistart ascent of max_b <b| U H0 U^dag |b>^2 over the circuit angles.
/// Restart 0 starts at identity angles, the rest at seeded uniform angles;
/// the returned delta is always an achieved value.
DeltaResult delta_h0(const DenseOperator& h0, const AnsatzSpec& spec,
                     const OptimizerConfig& cfg, int threads = 1);

BoundReport lower_bound(const DenseOperator& h, const AnsatzSpec& spec,
                        double epsilon, const OptimizerConfig& cfg,
                        int threads = 1);

}  // namespace obsdecomp
