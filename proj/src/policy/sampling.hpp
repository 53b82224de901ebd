// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nn/random.hpp"

namespace cc::policy {

// Smallest probability-sorted prefix whose cumulative mass reaches top_p.
// Equal probabilities are ordered by ascending token index. If rounding keeps
// the running sum below top_p, the whole support is returned.
std::vector<int> nucleus_set(std::span<const double> probs, double top_p);

// Draws one token from the renormalized nucleus. Throws ArgumentError when
// `probs` is not a distribution (negative entries, or a sum off by more than
// 1e-6) or top_p is outside (0, 1].
int nucleus_sample(std::span<const double> probs, double top_p, nn::Rng& rng);

// Lowest index among the maximal entries.
int argmax(std::span<const double> probs);

}  // namespace cc::policy
