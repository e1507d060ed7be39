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

#include "obsdecomp/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "obsdecomp/rng.hpp"

namespace obsdecomp {

void OptimizerConfig::validate() const {
  if (learning_rate <= 0 || max_iters <= 0 || restarts < 1 || fd_step <= 0 ||
      grad_tol <= 0) {
    throw std::invalid_argument("optimizer config fields must be positive");
  }
}

DescentResult adam_minimize(const ObjectiveFn& f, const GradientFn& grad,
                            ParamVector start, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t d = start.size();
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;

  ParamVector theta = std::move(start);
  DescentResult best{theta, f(theta)};

  std::vector<double> m(d, 0.0), v(d, 0.0);
  double b1t = 1.0, b2t = 1.0;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    const std::vector<double> g = grad(theta);
    double gnorm2 = 0.0;
    for (double gi : g) {
      gnorm2 += gi * gi;
    }
    if (std::sqrt(gnorm2) <= cfg.grad_tol) {
      break;
    }
    b1t *= beta1;
    b2t *= beta2;
    // Constant-rate Adam stalls at a step-size-limited floor; one decade of
    // geometric decay over the budget keeps exploration early while letting
    // the Armijo polish finish the refinement.
    const double lr = cfg.learning_rate *
                      std::pow(10.0, -1.0 * t / cfg.max_iters);
    for (std::size_t i = 0; i < d; ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / (1.0 - b1t);
      const double vhat = v[i] / (1.0 - b2t);
      theta[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
    const double val = f(theta);
    if (val < best.value) {
      best.theta = theta;
      best.value = val;
    }
  }
  return best;
}

DescentResult armijo_polish(const ObjectiveFn& f, const GradientFn& grad,
                            ParamVector start, int max_iters) {
  const std::size_t d = start.size();
  DescentResult cur{std::move(start), 0.0};
  cur.value = f(cur.theta);

  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    const std::vector<double> g = grad(cur.theta);
    double gnorm2 = 0.0;
    for (double gi : g) {
      gnorm2 += gi * gi;
    }
    if (gnorm2 <= 1e-26) {
      break;
    }
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      ParamVector cand(d);
      for (std::size_t i = 0; i < d; ++i) {
        cand[i] = cur.theta[i] - step * g[i];
      }
      const double val = f(cand);
      if (val <= cur.value - 1e-4 * step * gnorm2) {
        cur.theta = std::move(cand);
        cur.value = val;
        accepted = true;
        step = std::min(step * 2.0, 1.0);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;
    }
  }
  return cur;
}

DescentResult multistart_minimize(const ObjectiveFn& f, const GradientFn& grad,
                                  const std::vector<ParamVector>& starts,
                                  const OptimizerConfig& cfg, int threads) {
  if (starts.empty()) {
    throw std::invalid_argument("multistart needs at least one start");
  }
  std::vector<DescentResult> results(starts.size());
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(starts.size())));
  if (workers == 1) {
    for (std::size_t r = 0; r < starts.size(); ++r) {
      results[r] = adam_minimize(f, grad, starts[r], cfg);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t r = w; r < starts.size(); r += workers) {
          results[r] = adam_minimize(f, grad, starts[r], cfg);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].value < results[best].value) {
      best = r;
    }
  }
  // The polish re-evaluates the champion and only ever improves on it.
  return armijo_polish(f, grad, std::move(results[best].theta), 200);
}

ParamVector random_angles(int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ParamVector theta(count);
  for (int i = 0; i < count; ++i) {
    theta[i] = rng.next_double() * 6.283185307179586476925286766559;
  }
  return theta;
}

}  // namespace obsdecomp
