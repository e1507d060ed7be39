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

#include <cstdint>
#include <functional>
#include <vector>

#include "obsdecomp/circuit.hpp"

namespace obsdecomp {

/// Knobs of the finite-difference gradient optimizer used by the
/// decomposition loop and the lower-bound search.
struct OptimizerConfig {
  double learning_rate = 0.05;
  int max_iters = 300;
  int restarts = 4;
  double fd_step = 1e-4;   // central-difference half step, radians
  double grad_tol = 1e-10;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

using ObjectiveFn = std::function<double(const ParamVector&)>;
using GradientFn = std::function<std::vector<double>(const ParamVector&)>;

struct DescentResult {
  ParamVector theta;
  double value = 0.0;
};

/// Adam descent from `start` with a geometric learning-rate decay spanning
/// five decades over max_iters. Returns the best iterate seen, which is
/// never worse than the start.
DescentResult adam_minimize(const ObjectiveFn& f, const GradientFn& grad,
                            ParamVector start, const OptimizerConfig& cfg);

/// Backtracking (Armijo) gradient descent refinement; drives the iterate to
/// the finite-difference noise floor. Never worse than the start.
DescentResult armijo_polish(const ObjectiveFn& f, const GradientFn& grad,
                            ParamVector start, int max_iters);

/// Runs adam_minimize from each start (optionally across threads), keeping
/// the best result with ties broken by lowest start index, then polishes the
/// champion. Objective and gradient callbacks must be pure.
DescentResult multistart_minimize(const ObjectiveFn& f, const GradientFn& grad,
                                  const std::vector<ParamVector>& starts,
                                  const OptimizerConfig& cfg, int threads = 1);

/// Uniform draw from [0, 2pi)^count using the given stream seed.
ParamVector random_angles(int count, std::uint64_t seed);

}  // namespace obsdecomp
