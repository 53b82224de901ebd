// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include "policy/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace cc::policy {
namespace {

void validate(std::span<const double> probs, double top_p) {
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ArgumentError("top_p must lie in (0, 1]");
  if (probs.empty()) throw ArgumentError("empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ArgumentError("distribution has a negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw ArgumentError("distribution does not sum to 1");
}

}  // namespace

std::vector<int> nucleus_set(std::span<const double> probs, double top_p) {
  validate(probs, top_p);
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(b)];
  });
  double mass = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    mass += probs[static_cast<std::size_t>(order[k])];
    ++k;
    if (mass >= top_p) break;
  }
  order.resize(k);
  return order;
}

int nucleus_sample(std::span<const double> probs, double top_p, nn::Rng& rng) {
  const auto nucleus = nucleus_set(probs, top_p);
  if (nucleus.size() == 1) return nucleus.front();
  double mass = 0.0;
  for (int i : nucleus) mass += probs[static_cast<std::size_t>(i)];
  const double u = rng.uniform() * mass;
  double acc = 0.0;
  for (int i : nucleus) {
    acc += probs[static_cast<std::size_t>(i)];
    if (u < acc) return i;
  }
  // Rounding can leave u at the very top of the range.
  for (auto it = nucleus.rbegin(); it != nucleus.rend(); ++it) {
    if (probs[static_cast<std::size_t>(*it)] > 0.0) return *it;
  }
  return nucleus.front();
}

int argmax(std::span<const double> probs) {
  if (probs.empty()) throw ArgumentError("empty distribution");
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return static_cast<int>(best);
}

}  // namespace cc::policy
