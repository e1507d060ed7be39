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

#include "obsdecomp/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obsdecomp {

namespace {

// First index whose CDF strictly exceeds u; zero-probability terms span
// zero-width intervals and are never selected.
std::size_t sample_index(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

std::vector<double> born_cdf(const StateVector& psi, const Decomposition& d,
                             std::size_t k) {
  const StateVector evolved =
      apply_circuit_to_state(d.spec, d.terms[k].theta, psi);
  std::vector<double> cdf(evolved.dim());
  double acc = 0.0;
  for (std::int64_t b = 0; b < evolved.dim(); ++b) {
    acc += std::norm(evolved.amplitudes(b));
    cdf[b] = acc;
  }
  return cdf;
}

// Single shot against (possibly cached) per-term Born CDFs. Consumes two
// uniform draws, matching draw_sample exactly.
cx draw_with_cache(const StateVector& psi, const Decomposition& d,
                   const SamplingPlan& plan,
                   std::vector<std::vector<double>>& cache, SplitMix64& rng,
                   std::size_t* term_out) {
  const std::size_t k = sample_index(plan.cdf, rng.next_double());
  if (cache[k].empty()) {
    cache[k] = born_cdf(psi, d, k);
  }
  const std::size_t b = sample_index(cache[k], rng.next_double());
  if (term_out != nullptr) {
    *term_out = k;
  }
  return d.terms[k].lambda.values(b) / plan.probs[k];
}

double lower_median(std::vector<double> v) {
  const std::size_t idx = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + idx, v.end());
  return v[idx];
}

struct ShotLoopResult {
  std::vector<cx> samples;
  std::vector<std::int64_t> counts;
};

// Every shot owns a stream derived from (seed, shot index), so any
// partition of the loop across workers reproduces the same samples.
ShotLoopResult run_shots(const StateVector& psi, const Decomposition& d,
                         const SamplingPlan& plan, std::int64_t shots,
                         std::uint64_t seed) {
  ShotLoopResult out;
  out.samples.resize(shots);
  out.counts.assign(d.terms.size(), 0);
  std::vector<std::vector<double>> cache(d.terms.size());
  for (std::int64_t t = 0; t < shots; ++t) {
    SplitMix64 stream(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::size_t k = 0;
    out.samples[t] = draw_with_cache(psi, d, plan, cache, stream, &k);
    ++out.counts[k];
  }
  return out;
}

EstimateReport assemble_report(const Decomposition& d,
                               const ShotLoopResult& loop, int batches,
                               std::int64_t batch_size, std::uint64_t seed,
                               std::int64_t dropped) {
  EstimateReport report;
  report.value = median_of_means(loop.samples, batches);
  if (d.hermitian) {
    report.value = cx(report.value.real(), 0.0);
  }
  report.shots_used = static_cast<std::int64_t>(loop.samples.size());
  report.batches = batches;
  report.batch_size = batch_size;
  report.per_term_counts = loop.counts;
  report.rng_seed = seed;
  report.dropped_shots = dropped;

  cx mean = 0.0;
  for (const cx& v : loop.samples) {
    mean += v;
  }
  mean /= static_cast<double>(loop.samples.size());
  double var = 0.0;
  for (const cx& v : loop.samples) {
    var += std::norm(v - mean);
  }
  report.raw_sample_mean = mean.real();
  report.raw_sample_variance = var / static_cast<double>(loop.samples.size());
  return report;
}

EstimateReport run_estimate(const StateVector& psi, const Decomposition& d,
                            int batches, std::int64_t batch_size,
                            std::int64_t dropped, std::uint64_t seed) {
  if (psi.n_qubits != d.spec.n_qubits) {
    throw std::invalid_argument("state dimension does not match decomposition");
  }
  const SamplingPlan plan = make_plan(d);
  const ShotLoopResult loop =
      run_shots(psi, d, plan, batches * batch_size, seed);
  return assemble_report(d, loop, batches, batch_size, seed, dropped);
}

}  // namespace

SamplingPlan make_plan(const Decomposition& d) {
  if (d.terms.empty()) {
    throw std::invalid_argument("cannot build a plan for an empty decomposition");
  }
  SamplingPlan plan;
  plan.lambda_spec_norms.reserve(d.terms.size());
  for (const DecompTerm& t : d.terms) {
    const double norm = t.lambda.spectral_norm();
    plan.lambda_spec_norms.push_back(norm);
    plan.l1_norm += norm;
  }
  if (plan.l1_norm <= 0.0) {
    throw std::invalid_argument("all decomposition terms have zero norm");
  }
  plan.probs.reserve(d.terms.size());
  plan.cdf.reserve(d.terms.size());
  double acc = 0.0;
  for (double norm : plan.lambda_spec_norms) {
    const double p = norm / plan.l1_norm;
    plan.probs.push_back(p);
    acc += p;
    plan.cdf.push_back(acc);
  }
  plan.cdf.back() = 1.0;
  return plan;
}

cx draw_sample(const StateVector& psi, const Decomposition& d,
               const SamplingPlan& plan, SplitMix64& rng) {
  if (psi.n_qubits != d.spec.n_qubits) {
    throw std::invalid_argument("state dimension does not match decomposition");
  }
  std::vector<std::vector<double>> cache(d.terms.size());
  return draw_with_cache(psi, d, plan, cache, rng, nullptr);
}

cx median_of_means(const std::vector<cx>& samples, int batches) {
  if (samples.empty()) {
    throw std::invalid_argument("median_of_means: no samples");
  }
  if (batches < 1) {
    throw std::invalid_argument("median_of_means: batches must be >= 1");
  }
  const std::size_t batch_size = samples.size() / batches;
  if (batch_size == 0) {
    throw std::invalid_argument("median_of_means: more batches than samples");
  }
  std::vector<double> re(batches), im(batches);
  for (int b = 0; b < batches; ++b) {
    cx sum = 0.0;
    for (std::size_t i = b * batch_size; i < (b + 1) * batch_size; ++i) {
      sum += samples[i];
    }
    re[b] = sum.real() / static_cast<double>(batch_size);
    im[b] = sum.imag() / static_cast<double>(batch_size);
  }
  return {lower_median(std::move(re)), lower_median(std::move(im))};
}

std::pair<int, std::int64_t> required_shots(const SamplingPlan& plan,
                                            double eps2, double delta) {
  if (eps2 <= 0.0 || eps2 >= 1.0 || delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("eps2 and delta must lie in (0, 1)");
  }
  const int batches =
      static_cast<int>(std::ceil(8.0 * std::log(1.0 / delta)));
  const std::int64_t batch_size = static_cast<std::int64_t>(
      std::ceil(4.0 * plan.l1_norm * plan.l1_norm / (eps2 * eps2)));
  return {std::max(batches, 1), std::max<std::int64_t>(batch_size, 1)};
}

EstimateReport estimate(const StateVector& psi, const Decomposition& d,
                        double eps2, double delta, std::uint64_t rng_seed) {
  const SamplingPlan plan = make_plan(d);
  const auto [batches, batch_size] = required_shots(plan, eps2, delta);
  return run_estimate(psi, d, batches, batch_size, 0, rng_seed);
}

EstimateReport estimate_with_budget(const StateVector& psi,
                                    const Decomposition& d,
                                    std::int64_t total_shots, double delta,
                                    std::uint64_t rng_seed) {
  if (delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const int batches = std::max(
      1, static_cast<int>(std::ceil(8.0 * std::log(1.0 / delta))));
  const std::int64_t batch_size = total_shots / batches;
  if (batch_size < 1) {
    throw std::invalid_argument("shot budget smaller than the batch count");
  }
  const std::int64_t dropped = total_shots - batches * batch_size;
  return run_estimate(psi, d, batches, batch_size, dropped, rng_seed);
}

EstimateReport estimate_ensemble(
    const std::vector<std::pair<double, StateVector>>& ensemble,
    const Decomposition& d, double eps2, double delta,
    std::uint64_t rng_seed) {
  if (ensemble.empty()) {
    throw std::invalid_argument("ensemble is empty");
  }
  double weight_sum = 0.0;
  for (const auto& [w, psi] : ensemble) {
    if (w < 0.0) {
      throw std::invalid_argument("ensemble weights must be non-negative");
    }
    if (psi.n_qubits != d.spec.n_qubits) {
      throw std::invalid_argument("ensemble state dimension mismatch");
    }
    weight_sum += w;
  }
  if (weight_sum <= 0.0) {
    throw std::invalid_argument("ensemble weights sum to zero");
  }

  const SamplingPlan plan = make_plan(d);
  const auto [batches, batch_size] = required_shots(plan, eps2, delta);
  const std::int64_t shots = static_cast<std::int64_t>(batches) * batch_size;

  std::vector<double> member_cdf(ensemble.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    acc += ensemble[i].first / weight_sum;
    member_cdf[i] = acc;
  }
  member_cdf.back() = 1.0;

  // One Born cache per ensemble member; each shot draws member, term, bit.
  std::vector<std::vector<std::vector<double>>> caches(
      ensemble.size(), std::vector<std::vector<double>>(d.terms.size()));
  ShotLoopResult loop;
  loop.samples.resize(shots);
  loop.counts.assign(d.terms.size(), 0);
  for (std::int64_t t = 0; t < shots; ++t) {
    SplitMix64 stream(derive_seed(rng_seed, static_cast<std::uint64_t>(t)));
    const std::size_t member = sample_index(member_cdf, stream.next_double());
    std::size_t k = 0;
    loop.samples[t] = draw_with_cache(ensemble[member].second, d, plan,
                                      caches[member], stream, &k);
    ++loop.counts[k];
  }
  return assemble_report(d, loop, batches, batch_size, rng_seed, 0);
}

}  // namespace obsdecomp
