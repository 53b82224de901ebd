// Copyright 2026 The CounterCorrect Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "common/error.hpp"
#include "nn/random.hpp"
#include "policy/sampling.hpp"

using namespace cc;
using namespace cc::policy;

TEST_CASE("nucleus set is the smallest prefix reaching top_p", "[sampling]") {
  const std::vector<double> p{0.1, 0.4, 0.2, 0.3};
  CHECK(nucleus_set(p, 0.4) == std::vector<int>{1});
  CHECK(nucleus_set(p, 0.41) == std::vector<int>{1, 3});
  CHECK(nucleus_set(p, 0.7) == std::vector<int>{1, 3});
  CHECK(nucleus_set(p, 0.95) == std::vector<int>{1, 3, 2, 0});
  CHECK(nucleus_set(p, 1.0).size() == 4);
}

TEST_CASE("ties are ordered by index", "[sampling]") {
  const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
  CHECK(nucleus_set(p, 0.5) == std::vector<int>{0, 1});
  CHECK(argmax(p) == 0);
  const std::vector<double> q{0.1, 0.45, 0.45};
  CHECK(argmax(q) == 1);
  nn::Rng rng(1);
  for (int i = 0; i < 50; ++i) CHECK(nucleus_sample(q, 0.3, rng) == 1);
}

TEST_CASE("nucleus mass property", "[sampling][property]") {
  nn::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + rng.below(30);
    std::vector<double> p(n);
    for (auto& x : p) x = rng.uniform() + 1e-3;
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= s;
    const double top_p = 0.01 + 0.99 * rng.uniform();
    const auto set = nucleus_set(p, top_p);
    double mass = 0.0;
    for (int i : set) mass += p[i];
    CHECK(mass >= top_p - 1e-12);
    // Dropping the last member would fall short.
    CHECK(mass - p[set.back()] < top_p);
    // Members are at least as likely as non-members.
    double min_in = 1.0;
    for (int i : set) min_in = std::min(min_in, p[i]);
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::find(set.begin(), set.end(), static_cast<int>(i)) == set.end()) CHECK(p[i] <= min_in);
  }
}

TEST_CASE("sampler validates its inputs", "[sampling]") {
  nn::Rng rng(0);
  const std::vector<double> p{0.5, 0.5};
  CHECK_THROWS_AS(nucleus_sample(p, 0.0, rng), ArgumentError);
  CHECK_THROWS_AS(nucleus_sample(p, 1.1, rng), ArgumentError);
  const std::vector<double> neg{1.5, -0.5};
  CHECK_THROWS_AS(nucleus_sample(neg, 0.9, rng), ArgumentError);
  const std::vector<double> unnormalized{0.5, 0.6};
  CHECK_THROWS_AS(nucleus_sample(unnormalized, 0.9, rng), ArgumentError);
  CHECK_THROWS_AS(nucleus_sample(std::vector<double>{}, 0.9, rng), ArgumentError);
}

TEST_CASE("sampling is reproducible for a seed", "[sampling]") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  nn::Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) CHECK(nucleus_sample(p, 0.9, a) == nucleus_sample(p, 0.9, b));
}
