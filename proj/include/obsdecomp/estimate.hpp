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

#include <complex>
#include <cstdint>
#include <vector>

#include "obsdecomp/decompose.hpp"
#include "obsdecomp/rng.hpp"

namespace obsdecomp {

/// Importance-sampling distribution over decomposition terms:
/// p_k proportional to the spectral norm of Lambda_k.
struct SamplingPlan {
  std::vector<double> probs;
  std::vector<double> lambda_spec_norms;
  double l1_norm = 0.0;          // sum of the spectral norms
  std::vector<double> cdf;       // cumulative probs for inverse-CDF draws
};

struct EstimateReport {
  cx value;
  std::int64_t shots_used = 0;
  int batches = 0;
  std::int64_t batch_size = 0;
  std::vector<std::int64_t> per_term_counts;
  std::uint64_t rng_seed = 0;
  double raw_sample_mean = 0.0;      // mean of the real parts
  double raw_sample_variance = 0.0;  // mean squared deviation |v - mean|^2
  std::int64_t dropped_shots = 0;    // budget remainder not used by batching
};

SamplingPlan make_plan(const Decomposition& d);

/// One sampling shot: draw a term, run its circuit on psi, measure in the
/// computational basis, return Lambda_k(b) / p_k. Consumes exactly two
/// 64-bit draws.
cx draw_sample(const StateVector& psi, const Decomposition& d,
               const SamplingPlan& plan, SplitMix64& rng);

/// Componentwise median of contiguous batch means (lower median when the
/// batch count is even). Trailing samples that do not fill a batch are
/// ignored by the caller's bookkeeping.
cx median_of_means(const std::vector<cx>& samples, int batches);

/// Shot calculator from the variance bound Var(v) <= l1^2:
/// batches = ceil(8 ln(1/delta)), batch_size = ceil(4 l1^2 / eps2^2).
std::pair<int, std::int64_t> required_shots(const SamplingPlan& plan,
                                            double eps2, double delta);

/// Full estimator: plan, shot calculator, T draws with per-shot streams
/// derived from (rng_seed, shot_index), median of means.
EstimateReport estimate(const StateVector& psi, const Decomposition& d,
                        double eps2, double delta, std::uint64_t rng_seed);

/// Same sampler but with an explicit total shot budget; the batch count
/// still comes from delta and the remainder is dropped and recorded.
EstimateReport estimate_with_budget(const StateVector& psi,
                                    const Decomposition& d,
                                    std::int64_t total_shots, double delta,
                                    std::uint64_t rng_seed);

/// Mixed-state input as a weighted ensemble of pure states; each shot first
/// samples an ensemble member, then proceeds as in `estimate`.
EstimateReport estimate_ensemble(
    const std::vector<std::pair<double, StateVector>>& ensemble,
    const Decomposition& d, double eps2, double delta, std::uint64_t rng_seed);

}  // namespace obsdecomp
